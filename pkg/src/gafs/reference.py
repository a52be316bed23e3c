"""Known-good feature sets and their recorded NSL-KDD test metrics.

These are the selected-feature sets from the benchmark runs this project
reproduces, together with the confusion counts and rates recorded for them.
Verification mode re-evaluates each set on local NSL-KDD files and reports
the deltas. Expected percentages are two-decimal values; expected confusion
counts are exact but depend on classifier internals, so verification reports
rather than enforces them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .metrics import ConfusionMatrix


@dataclass(frozen=True)
class ReferenceCase:
    name: str
    target: str  # attack name or the literal group "dos-all"
    criterion: str
    features: tuple[str, ...]  # canonical feature names
    expected_cm: ConfusionMatrix
    # percent values keyed by metric name; only the recorded ones are present
    expected_pct: dict[str, float] = field(default_factory=dict)


REFERENCE_CASES: tuple[ReferenceCase, ...] = (
    ReferenceCase(
        name="dos-all/entropy",
        target="dos-all",
        criterion="entropy",
        features=(
            "protocol_type", "service", "dst_bytes", "land", "wrong_fragment",
            "logged_in", "count", "serror_rate", "same_srv_rate",
            "diff_srv_rate", "dst_host_srv_serror_rate",
        ),
        expected_cm=ConfusionMatrix(tp=5718, fn=23, fp=57, tn=16746),
        # the detection-rate triple recorded for this case does not follow the
        # fp/(fp+tn), fn/(tp+fn) convention every other case obeys, so it is
        # omitted here rather than compared against
        expected_pct={
            "accuracy": 99.65, "precision": 99.01, "recall": 99.60,
            "f_measure": 99.31, "specificity": 99.66,
        },
    ),
    ReferenceCase(
        name="dos-all/gini",
        target="dos-all",
        criterion="gini",
        features=(
            "protocol_type", "service", "dst_bytes", "land", "wrong_fragment",
            "count", "serror_rate", "same_srv_rate", "diff_srv_rate",
            "srv_diff_host_rate", "dst_host_serror_rate",
        ),
        expected_cm=ConfusionMatrix(tp=5716, fn=25, fp=54, tn=16749),
        expected_pct={
            "accuracy": 99.65, "precision": 99.06, "recall": 99.56,
            "f_measure": 99.31, "specificity": 99.68,
            "detection_rate": 99.24, "fp_pct": 0.32, "fn_pct": 0.44,
        },
    ),
    ReferenceCase(
        name="back/entropy",
        target="back",
        criterion="entropy",
        features=("dst_bytes", "dst_host_srv_diff_host_rate"),
        expected_cm=ConfusionMatrix(tp=359, fn=0, fp=0, tn=22185),
        expected_pct={
            "accuracy": 100.0, "precision": 100.0, "recall": 100.0,
            "f_measure": 100.0, "specificity": 100.0,
            "detection_rate": 100.0, "fp_pct": 0.0, "fn_pct": 0.0,
        },
    ),
    ReferenceCase(
        name="land/entropy",
        target="land",
        criterion="entropy",
        features=("land",),
        expected_cm=ConfusionMatrix(tp=7, fn=0, fp=0, tn=22537),
        expected_pct={
            "accuracy": 100.0, "precision": 100.0, "recall": 100.0,
            "f_measure": 100.0, "specificity": 100.0,
            "detection_rate": 100.0, "fp_pct": 0.0, "fn_pct": 0.0,
        },
    ),
    ReferenceCase(
        name="neptune/entropy",
        target="neptune",
        criterion="entropy",
        features=(
            "duration", "flag", "land", "serror_rate", "srv_serror_rate",
            "diff_srv_rate", "dst_host_srv_diff_host_rate",
            "dst_host_srv_serror_rate",
        ),
        expected_cm=ConfusionMatrix(tp=4651, fn=6, fp=13, tn=17874),
        expected_pct={
            "accuracy": 99.92, "precision": 99.72, "recall": 99.87,
            "f_measure": 99.80, "specificity": 99.93,
            "detection_rate": 99.80, "fp_pct": 0.07, "fn_pct": 0.13,
        },
    ),
    ReferenceCase(
        name="pod/entropy",
        target="pod",
        criterion="entropy",
        features=("src_bytes", "dst_host_diff_srv_rate"),
        expected_cm=ConfusionMatrix(tp=39, fn=2, fp=15, tn=22488),
        expected_pct={
            "accuracy": 99.92, "precision": 72.22, "recall": 95.12,
            "f_measure": 82.11, "specificity": 99.93,
            "detection_rate": 95.06, "fp_pct": 0.07, "fn_pct": 4.88,
        },
    ),
    ReferenceCase(
        name="smurf/entropy",
        target="smurf",
        criterion="entropy",
        features=("protocol_type", "src_bytes"),
        expected_cm=ConfusionMatrix(tp=665, fn=0, fp=0, tn=21879),
        expected_pct={
            "accuracy": 100.0, "precision": 100.0, "recall": 100.0,
            "f_measure": 100.0, "specificity": 100.0,
            "detection_rate": 100.0, "fp_pct": 0.0, "fn_pct": 0.0,
        },
    ),
    ReferenceCase(
        name="teardrop/entropy",
        target="teardrop",
        criterion="entropy",
        features=("protocol_type", "wrong_fragment"),
        expected_cm=ConfusionMatrix(tp=12, fn=0, fp=37, tn=22495),
        expected_pct={
            "accuracy": 99.84, "precision": 24.49, "recall": 100.0,
            "f_measure": 39.34, "specificity": 99.84,
            "detection_rate": 99.84, "fp_pct": 0.16, "fn_pct": 0.0,
        },
    ),
    ReferenceCase(
        name="pod/gini",
        target="pod",
        criterion="gini",
        features=("protocol_type", "src_bytes", "wrong_fragment",
                  "dst_host_diff_srv_rate"),
        expected_cm=ConfusionMatrix(tp=41, fn=0, fp=16, tn=22487),
        expected_pct={
            "accuracy": 99.93, "precision": 71.93, "recall": 100.0,
            "f_measure": 83.67, "specificity": 99.93,
            "detection_rate": 99.93, "fp_pct": 0.07, "fn_pct": 0.0,
        },
    ),
    ReferenceCase(
        name="teardrop/gini",
        target="teardrop",
        criterion="gini",
        features=("protocol_type", "src_bytes", "dst_host_srv_count",
                  "dst_host_diff_srv_rate"),
        expected_cm=ConfusionMatrix(tp=12, fn=0, fp=36, tn=22496),
        expected_pct={
            "accuracy": 99.84, "precision": 25.00, "recall": 100.0,
            "f_measure": 40.00, "specificity": 99.84,
            "detection_rate": 99.84, "fp_pct": 0.16, "fn_pct": 0.0,
        },
    ),
)
