"""NSL-KDD file parsing, symbolic encoding, binary relabeling and column projection.

Input files are comma-separated text with no header: 41 feature columns
followed by the attack label, and in the commonly distributed variants a
trailing difficulty score (42 or 43 columns total). The difficulty score is
accepted and dropped.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

# Canonical feature names, in file column order.
FEATURE_NAMES: tuple[str, ...] = (
    "duration", "protocol_type", "service", "flag", "src_bytes", "dst_bytes",
    "land", "wrong_fragment", "urgent", "hot", "num_failed_logins",
    "logged_in", "num_compromised", "root_shell", "su_attempted", "num_root",
    "num_file_creations", "num_shells", "num_access_files",
    "num_outbound_cmds", "is_host_login", "is_guest_login", "count",
    "srv_count", "serror_rate", "srv_serror_rate", "rerror_rate",
    "srv_rerror_rate", "same_srv_rate", "diff_srv_rate", "srv_diff_host_rate",
    "dst_host_count", "dst_host_srv_count", "dst_host_same_srv_rate",
    "dst_host_diff_srv_rate", "dst_host_same_src_port_rate",
    "dst_host_srv_diff_host_rate", "dst_host_serror_rate",
    "dst_host_srv_serror_rate", "dst_host_rerror_rate",
    "dst_host_srv_rerror_rate",
)

N_FEATURES = len(FEATURE_NAMES)

# Columns carrying symbolic values that need integer encoding.
SYMBOLIC_COLUMNS: tuple[str, ...] = ("protocol_type", "service", "flag")

# Alternate names used in the bundled reference reports for a subset of the
# features; every feature not listed here keeps its canonical name.
REPORT_ALIASES: dict[str, str] = {
    "protocol_type": "proto_type",
    "service": "svc_num",
    "flag": "flag_num",
    "serror_rate": "error_rate",
    "srv_serror_rate": "srv_error_rate",
    "dst_host_serror_rate": "dst_host_error_rate",
    "dst_host_srv_serror_rate": "dst_host_srv_error_rate",
}

# The six denial-of-service attacks present in NSL-KDD.
DOS_ATTACKS: frozenset[str] = frozenset(
    {"neptune", "smurf", "back", "teardrop", "pod", "land"}
)


class ParseError(ValueError):
    """Malformed NSL-KDD input (bad column count, empty field, bad number)."""


class DegenerateMaskError(ValueError):
    """A feature mask that selects no columns of the dataset it is applied to."""


def report_alias(name: str) -> str:
    """Alias used for this feature in the reference reports (or the name itself)."""
    return REPORT_ALIASES.get(name, name)


@dataclass(frozen=True)
class FeatureMask:
    """A chromosome: one boolean gene per feature column."""

    genes: tuple[bool, ...]

    def __post_init__(self) -> None:
        if len(self.genes) != N_FEATURES:
            raise ValueError(f"mask must have {N_FEATURES} genes, got {len(self.genes)}")
        if not all(isinstance(g, bool) for g in self.genes):
            object.__setattr__(self, "genes", tuple(bool(g) for g in self.genes))

    @classmethod
    def from_array(cls, genes) -> "FeatureMask":
        return cls(tuple(bool(g) for g in genes))

    @classmethod
    def from_indices(cls, indices) -> "FeatureMask":
        wanted = set(indices)
        return cls(tuple(i in wanted for i in range(N_FEATURES)))

    @classmethod
    def from_names(cls, names) -> "FeatureMask":
        unknown = [n for n in names if n not in FEATURE_NAMES]
        if unknown:
            raise ValueError(
                f"unknown feature name(s) {unknown}; valid names: {', '.join(FEATURE_NAMES)}"
            )
        wanted = set(names)
        return cls(tuple(name in wanted for name in FEATURE_NAMES))

    @classmethod
    def from_bits(cls, bits: str) -> "FeatureMask":
        return cls(tuple(c == "1" for c in bits))

    @classmethod
    def all_on(cls) -> "FeatureMask":
        return cls((True,) * N_FEATURES)

    @property
    def selected_count(self) -> int:
        return sum(self.genes)

    def indices(self) -> tuple[int, ...]:
        return tuple(i for i, g in enumerate(self.genes) if g)

    def selected_names(self) -> tuple[str, ...]:
        return tuple(FEATURE_NAMES[i] for i in self.indices())

    def constrain(self, allowed: "FeatureMask") -> "FeatureMask":
        """Force every gene outside ``allowed`` off."""
        return FeatureMask(tuple(g and a for g, a in zip(self.genes, allowed.genes)))

    def as_array(self) -> np.ndarray:
        return np.array(self.genes, dtype=bool)

    def bits(self) -> str:
        return "".join("1" if g else "0" for g in self.genes)


@dataclass(frozen=True)
class RawRecord:
    """One parsed but not yet encoded connection row."""

    values: tuple[str, ...]
    label: str
    difficulty: int | None = None


@dataclass
class RawDataset:
    """File-order rows with symbolic columns still as strings."""

    records: list[RawRecord]
    role: str = ""
    feature_names: tuple[str, ...] = FEATURE_NAMES

    def __len__(self) -> int:
        return len(self.records)


@dataclass
class Dataset:
    """Encoded rows: a float matrix plus the original labels, in file order."""

    features: np.ndarray  # (n, 41) float64
    labels: tuple[str, ...]
    role: str = ""
    feature_names: tuple[str, ...] = FEATURE_NAMES

    def __len__(self) -> int:
        return len(self.labels)

    def to_dict(self) -> dict:
        return {
            "role": self.role,
            "feature_names": list(self.feature_names),
            "labels": list(self.labels),
            "features": self.features.tolist(),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Dataset":
        features = np.asarray(doc["features"], dtype=np.float64)
        features = features.reshape(len(doc["labels"]), len(doc["feature_names"]))
        return cls(
            features=features,
            labels=tuple(doc["labels"]),
            role=doc.get("role", ""),
            feature_names=tuple(doc["feature_names"]),
        )


@dataclass
class BinaryLabeledDataset:
    """Feature matrix plus boolean targets for one target-vs-rest task."""

    features: np.ndarray  # (n, k) float64
    targets: np.ndarray  # (n,) bool
    feature_names: tuple[str, ...]
    target_spec: frozenset[str]

    def __len__(self) -> int:
        return len(self.targets)

    @property
    def n_features(self) -> int:
        return self.features.shape[1]


@dataclass
class Codebook:
    """Per-column category-to-code maps, in first-appearance order.

    ``extensions`` records categories appended after the build (categories met
    while encoding a set other than the building one); each entry is
    (column, category, assigned code).
    """

    columns: dict[str, dict[str, int]]
    provenance: str = ""
    extensions: list[tuple[str, str, int]] = field(default_factory=list)

    def code_for(self, column: str, category: str) -> int:
        """Code for ``category``, appending it with the next code if unseen."""
        mapping = self.columns[column]
        code = mapping.get(category)
        if code is None:
            code = len(mapping)
            mapping[category] = code
            self.extensions.append((column, category, code))
        return code

    def warnings(self) -> list[str]:
        return [
            f"category {cat!r} in column {col!r} was not in the codebook; "
            f"appended with code {code}"
            for col, cat, code in self.extensions
        ]

    def to_dict(self) -> dict:
        return {
            "built_from": self.provenance,
            "columns": {col: dict(mapping) for col, mapping in self.columns.items()},
            "extensions": [list(e) for e in self.extensions],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Codebook":
        return cls(
            columns={col: {k: int(v) for k, v in mapping.items()}
                     for col, mapping in doc["columns"].items()},
            provenance=doc.get("built_from", ""),
            extensions=[(c, s, int(n)) for c, s, n in doc.get("extensions", [])],
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "Codebook":
        return cls.from_dict(json.loads(Path(path).read_text()))


def parse_file(path: str | Path, role: str = "") -> RawDataset:
    """Read an NSL-KDD file into one RawRecord per line, in file order.

    Accepts 42-column (features + label) and 43-column (+ difficulty) lines;
    the difficulty score is kept on the record but ignored downstream.
    """
    path = Path(path)
    records: list[RawRecord] = []
    intern = sys.intern  # field values repeat massively across rows
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.rstrip("\n").rstrip("\r")
            fields = line.split(",")
            if len(fields) not in (N_FEATURES + 1, N_FEATURES + 2):
                raise ParseError(
                    f"{path.name}: line {lineno}: expected {N_FEATURES + 1} or "
                    f"{N_FEATURES + 2} comma-separated columns, found {len(fields)}"
                )
            values = tuple(intern(f) for f in fields[:N_FEATURES])
            for col, value in enumerate(values):
                if value == "":
                    raise ParseError(
                        f"{path.name}: line {lineno}: empty field in column "
                        f"{col + 1} ({FEATURE_NAMES[col]})"
                    )
            label = fields[N_FEATURES].strip()
            if not label:
                raise ParseError(f"{path.name}: line {lineno}: empty label")
            difficulty = None
            if len(fields) == N_FEATURES + 2:
                try:
                    difficulty = int(fields[N_FEATURES + 1].strip())
                except ValueError:
                    raise ParseError(
                        f"{path.name}: line {lineno}: difficulty column "
                        f"{fields[N_FEATURES + 1]!r} is not an integer"
                    ) from None
            records.append(RawRecord(values=values, label=intern(label),
                                     difficulty=difficulty))
    return RawDataset(records=records, role=role)


def build_codebook(train: RawDataset) -> Codebook:
    """Assign integer codes to symbolic categories in first-appearance order."""
    column_index = {name: train.feature_names.index(name) for name in SYMBOLIC_COLUMNS}
    columns: dict[str, dict[str, int]] = {name: {} for name in SYMBOLIC_COLUMNS}
    for record in train.records:
        for name, ci in column_index.items():
            mapping = columns[name]
            value = record.values[ci]
            if value not in mapping:
                mapping[value] = len(mapping)
    return Codebook(columns=columns, provenance=train.role or "training")


def encode(data: RawDataset, book: Codebook) -> Dataset:
    """Replace symbolic columns by codebook codes and parse the rest as numbers.

    Categories absent from the codebook are appended to it with the next free
    code; the codebook records the append so the run report can surface it.
    """
    n = len(data.records)
    features = np.empty((n, N_FEATURES), dtype=np.float64)
    for ci, name in enumerate(data.feature_names):
        column = [record.values[ci] for record in data.records]
        if name in SYMBOLIC_COLUMNS:
            # cache lookups: symbolic columns have few distinct values
            seen: dict[str, int] = {}
            out = features[:, ci]
            for ri, value in enumerate(column):
                code = seen.get(value)
                if code is None:
                    code = book.code_for(name, value)
                    seen[value] = code
                out[ri] = code
            continue
        try:
            values = np.asarray(column, dtype=np.float64)
        except ValueError:
            values = _parse_column_slow(column, name)
        if not np.isfinite(values).all():
            bad = int(np.flatnonzero(~np.isfinite(values))[0])
            raise ParseError(
                f"row {bad + 1}, column {name!r}: value {column[bad]!r} is not finite"
            )
        features[:, ci] = values
    labels = tuple(record.label for record in data.records)
    return Dataset(features=features, labels=labels, role=data.role,
                   feature_names=data.feature_names)


def _parse_column_slow(column: list[str], name: str) -> np.ndarray:
    # only reached on error, to attribute the failure to a row
    values = np.empty(len(column), dtype=np.float64)
    for ri, value in enumerate(column):
        try:
            values[ri] = float(value)
        except ValueError:
            raise ParseError(
                f"row {ri + 1}, column {name!r}: cannot parse {value!r} as a number"
            ) from None
    return values


def relabel(data: Dataset, target_attacks) -> BinaryLabeledDataset:
    """Mark records of the target attacks positive and everything else negative.

    Other attacks, normal traffic and attack names unseen in training all
    count as negative. Matching is case-insensitive and whitespace-trimmed.
    """
    wanted = frozenset(name.strip().lower() for name in target_attacks)
    if not wanted or not any(wanted):
        raise ValueError("target attack set is empty: no positive class to learn")
    targets = np.fromiter(
        (label.strip().lower() in wanted for label in data.labels),
        dtype=bool,
        count=len(data.labels),
    )
    return BinaryLabeledDataset(
        features=data.features,
        targets=targets,
        feature_names=data.feature_names,
        target_spec=wanted,
    )


def project(data: BinaryLabeledDataset, mask: FeatureMask) -> BinaryLabeledDataset:
    """Restrict the dataset to the mask's columns, preserving canonical order."""
    if mask.selected_count == 0:
        raise DegenerateMaskError("mask selects no features")
    wanted = set(mask.selected_names())
    keep = [i for i, name in enumerate(data.feature_names) if name in wanted]
    if not keep:
        raise DegenerateMaskError("mask selects no columns present in this dataset")
    return BinaryLabeledDataset(
        features=data.features[:, keep],
        targets=data.targets,
        feature_names=tuple(data.feature_names[i] for i in keep),
        target_spec=data.target_spec,
    )
