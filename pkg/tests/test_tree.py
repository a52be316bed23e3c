import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gafs.nslkdd import BinaryLabeledDataset, FeatureMask, project
from gafs.tree import (
    DecisionTree,
    TreeConfig,
    best_split,
    fit,
    impurity,
    predict,
    predict_batch,
)

from oracles import brute_force_splits


def binary(X, y):
    X = np.asarray(X, dtype=float)
    names = tuple(f"f{i}" for i in range(X.shape[1]))
    return BinaryLabeledDataset(X, np.asarray(y, bool), names, frozenset({"a"}))


# ------------------------------------------------------------------ impurity


def test_impurity_pure_node_is_zero():
    assert impurity((10, 0), "entropy") == 0.0
    assert impurity((0, 10), "gini") == 0.0


def test_impurity_balanced_node():
    assert impurity((5, 5), "entropy") == pytest.approx(1.0)
    assert impurity((5, 5), "gini") == pytest.approx(0.5)


def test_impurity_eight_two():
    # -0.8*log2(0.8) - 0.2*log2(0.2) and 1 - 0.64 - 0.04, worked by hand
    assert impurity((8, 2), "entropy") == pytest.approx(0.72193, abs=1e-5)
    assert impurity((8, 2), "gini") == pytest.approx(0.32, abs=1e-12)


def test_impurity_empty_node_rejected():
    with pytest.raises(ValueError):
        impurity((0, 0), "entropy")


def test_impurity_unknown_criterion_rejected():
    with pytest.raises(ValueError):
        impurity((1, 1), "variance")


@given(
    a=st.integers(min_value=0, max_value=10_000),
    b=st.integers(min_value=0, max_value=10_000),
    criterion=st.sampled_from(["entropy", "gini"]),
)
def test_impurity_bounds_and_purity(a, b, criterion):
    if a + b == 0:
        return
    value = impurity((a, b), criterion)
    upper = 1.0 if criterion == "entropy" else 0.5
    assert -1e-12 <= value <= upper + 1e-12
    if a == 0 or b == 0:
        assert value == 0.0
    else:
        assert value > 0.0


# ---------------------------------------------------------------- best_split


def test_perfect_separator_gains_parent_impurity():
    split = best_split([[0.0], [1.0], [0.0], [1.0]], [False, True, False, True], "entropy")
    assert split.feature_index == 0
    assert split.threshold == pytest.approx(0.5)
    assert split.impurity_decrease == pytest.approx(1.0)


def test_identical_feature_vectors_give_no_split():
    X = np.ones((6, 3))
    y = [True, False, True, False, False, True]
    assert best_split(X, y, "entropy") is None
    assert best_split(X, y, "gini") is None


def test_pure_node_gives_no_split():
    X = np.arange(8.0).reshape(4, 2)
    assert best_split(X, [True] * 4, "gini") is None


def test_tie_breaks_prefer_lowest_feature_then_threshold():
    # both columns separate perfectly; feature 0 must win
    X = np.array([[0, 0], [0, 0], [1, 1], [1, 1]], dtype=float)
    y = [False, False, True, True]
    split = best_split(X, y, "gini")
    assert split.feature_index == 0
    # within one column, two equally good thresholds: the lower wins
    X2 = np.array([[0.0], [1.0], [2.0], [3.0]])
    y2 = [False, True, False, True]
    split2 = best_split(X2, y2, "entropy")
    assert split2.threshold == pytest.approx(0.5)


small_instances = st.tuples(
    st.integers(min_value=2, max_value=12),  # records
    st.integers(min_value=1, max_value=3),  # features
).flatmap(
    lambda shape: st.tuples(
        st.lists(
            st.lists(st.integers(min_value=0, max_value=3),
                     min_size=shape[1], max_size=shape[1]),
            min_size=shape[0], max_size=shape[0],
        ),
        st.lists(st.booleans(), min_size=shape[0], max_size=shape[0]),
    )
)


@settings(max_examples=300, deadline=None)
@given(instance=small_instances, criterion=st.sampled_from(["entropy", "gini"]))
def test_root_split_matches_exhaustive_search(instance, criterion):
    rows, y = instance
    X = np.array(rows, dtype=float)
    chosen = best_split(X, y, criterion)
    oracle = brute_force_splits(X, y, criterion)
    pos = sum(y)
    if pos in (0, len(y)) or not oracle:
        assert chosen is None
        return
    best_decrease = max(d for _, _, d in oracle)
    assert chosen is not None
    assert chosen.impurity_decrease == pytest.approx(best_decrease, abs=1e-9)
    # the implementation's pick must be among the oracle's optimal splits
    # (1e-9 window absorbs float noise between the two computations)
    optimal = [(f, t) for f, t, d in oracle if d >= best_decrease - 1e-9]
    assert (chosen.feature_index, chosen.threshold) in [
        (f, pytest.approx(t)) for f, t in optimal
    ]
    if len(optimal) == 1:
        f, t = optimal[0]
        assert chosen.feature_index == f
        assert chosen.threshold == pytest.approx(t)


# ----------------------------------------------------------------------- fit


def test_constant_labels_give_single_leaf():
    data = binary([[1, 2], [3, 4], [5, 6]], [False, False, False])
    tree = fit(data, TreeConfig("entropy"))
    assert tree.node_count == 1
    assert tree.root.is_leaf
    assert tree.root.predicted is False


def test_xor_reaches_depth_two_and_fits_training_data():
    data = binary([[0, 0], [0, 1], [1, 0], [1, 1]], [False, True, True, False])
    for criterion in ("entropy", "gini"):
        tree = fit(data, TreeConfig(criterion))
        assert tree.depth == 2
        assert np.array_equal(predict_batch(tree, data.features), data.targets)


def test_fully_grown_tree_has_zero_training_error(tiny_task):
    tree = fit(tiny_task, TreeConfig("entropy"))
    assert np.array_equal(predict_batch(tree, tiny_task.features), tiny_task.targets)


def test_fit_rejects_empty_inputs():
    with pytest.raises(ValueError):
        fit(binary(np.empty((0, 2)), []), TreeConfig())
    with pytest.raises(ValueError):
        fit(binary(np.empty((3, 0)), [True, False, True]), TreeConfig())


def test_max_depth_bounds_growth(tiny_task):
    tree = fit(tiny_task, TreeConfig("gini", max_depth=2))
    assert tree.depth <= 2


def test_min_split_samples_stops_growth():
    data = binary([[0], [1], [2], [3]], [False, True, False, True])
    tree = fit(data, TreeConfig("entropy", min_split_samples=5))
    assert tree.node_count == 1


def test_leaf_tie_predicts_negative():
    data = binary([[1], [1]], [True, False])
    tree = fit(data, TreeConfig("entropy"))
    assert tree.root.is_leaf
    assert tree.root.predicted is False


def test_fit_is_deterministic(tiny_task):
    a = fit(tiny_task, TreeConfig("entropy"))
    b = fit(tiny_task, TreeConfig("entropy"))
    assert json.dumps(a.to_dict()) == json.dumps(b.to_dict())


def test_internal_decreases_are_nonnegative(tiny_task):
    tree = fit(tiny_task, TreeConfig("gini"))

    def walk(node):
        if node.is_leaf:
            return
        assert node.impurity_decrease >= 0.0
        walk(node.left)
        walk(node.right)

    walk(tree.root)
    assert tree.node_count >= 3


def test_tree_serialization_round_trip(tiny_task):
    tree = fit(tiny_task, TreeConfig("entropy"))
    back = DecisionTree.from_dict(json.loads(json.dumps(tree.to_dict())))
    assert json.dumps(back.to_dict()) == json.dumps(tree.to_dict())
    assert np.array_equal(
        predict_batch(back, tiny_task.features),
        predict_batch(tree, tiny_task.features),
    )


# ------------------------------------------------------------------- predict


def test_single_leaf_tree_predicts_its_class_for_any_input():
    data = binary([[1, 2], [3, 4]], [True, True])
    tree = fit(data, TreeConfig("gini"))
    assert predict(tree, [0, 0]) is True
    assert predict(tree, [99, -5]) is True


def test_predict_rejects_length_mismatch(tiny_task):
    tree = fit(tiny_task, TreeConfig("entropy"))
    with pytest.raises(ValueError):
        predict(tree, [0.0] * (tree.feature_count + 1))
    with pytest.raises(ValueError):
        predict_batch(tree, np.zeros((3, tree.feature_count + 1)))


def test_predict_batch_agrees_with_predict(tiny_task):
    tree = fit(tiny_task, TreeConfig("entropy"))
    batch = predict_batch(tree, tiny_task.features)
    singles = [predict(tree, row) for row in tiny_task.features]
    assert list(batch) == singles


def test_masked_out_features_cannot_affect_predictions(synth_flood):
    train, test = synth_flood
    mask = FeatureMask.from_names(["protocol_type", "wrong_fragment", "count"])
    tree = fit(project(train, mask), TreeConfig("entropy"))
    baseline = predict_batch(tree, project(test, mask).features)

    rng = np.random.default_rng(7)
    perturbed_features = test.features.copy()
    masked_out = [i for i, g in enumerate(mask.genes) if not g]
    perturbed_features[:, masked_out] = rng.random((len(test), len(masked_out))) * 1e6
    perturbed = BinaryLabeledDataset(
        perturbed_features, test.targets, test.feature_names, test.target_spec
    )
    assert np.array_equal(
        predict_batch(tree, project(perturbed, mask).features), baseline
    )
