"""Binary decision tree with threshold splits and a selectable impurity criterion.

Splits are axis-aligned (``value <= threshold`` goes left), candidate
thresholds are midpoints between consecutive distinct sorted values, and
growth is greedy: every impure node that still has a candidate threshold is
split by the largest weighted impurity decrease. Ties are broken by lowest
feature index, then lowest threshold, so training is fully deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .nslkdd import BinaryLabeledDataset

CRITERIA = ("entropy", "gini")


@dataclass(frozen=True)
class TreeConfig:
    criterion: str = "entropy"
    max_depth: int | None = None
    min_split_samples: int = 2

    def __post_init__(self) -> None:
        if self.criterion not in CRITERIA:
            raise ValueError(f"criterion must be one of {CRITERIA}, got {self.criterion!r}")
        if self.max_depth is not None and self.max_depth < 1:
            raise ValueError("max_depth must be a positive integer or None")
        if self.min_split_samples < 2:
            raise ValueError("min_split_samples must be at least 2")


@dataclass
class TreeNode:
    """Internal node (feature_index >= 0) or leaf (children are None).

    ``class_counts`` is (negatives, positives) of the training samples that
    reached the node. Leaf prediction is the majority class; an exact tie
    predicts negative.
    """

    class_counts: tuple[int, int]
    predicted: bool
    feature_index: int = -1
    threshold: float = 0.0
    impurity_decrease: float = 0.0
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    def to_dict(self) -> dict:
        if self.is_leaf:
            return {
                "leaf": True,
                "predicted": self.predicted,
                "counts": list(self.class_counts),
            }
        return {
            "leaf": False,
            "feature": self.feature_index,
            "threshold": self.threshold,
            "decrease": self.impurity_decrease,
            "counts": list(self.class_counts),
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "TreeNode":
        counts = (int(doc["counts"][0]), int(doc["counts"][1]))
        if doc["leaf"]:
            return cls(class_counts=counts, predicted=bool(doc["predicted"]))
        return cls(
            class_counts=counts,
            predicted=counts[1] > counts[0],
            feature_index=int(doc["feature"]),
            threshold=float(doc["threshold"]),
            impurity_decrease=float(doc["decrease"]),
            left=cls.from_dict(doc["left"]),
            right=cls.from_dict(doc["right"]),
        )


@dataclass(frozen=True)
class Split:
    feature_index: int
    threshold: float
    impurity_decrease: float


@dataclass
class DecisionTree:
    root: TreeNode
    config: TreeConfig
    feature_count: int
    depth: int = 0
    node_count: int = 0
    feature_names: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "criterion": self.config.criterion,
            "max_depth": self.config.max_depth,
            "min_split_samples": self.config.min_split_samples,
            "feature_count": self.feature_count,
            "feature_names": list(self.feature_names),
            "depth": self.depth,
            "node_count": self.node_count,
            "root": self.root.to_dict(),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "DecisionTree":
        return cls(
            root=TreeNode.from_dict(doc["root"]),
            config=TreeConfig(
                criterion=doc["criterion"],
                max_depth=doc["max_depth"],
                min_split_samples=doc["min_split_samples"],
            ),
            feature_count=int(doc["feature_count"]),
            depth=int(doc["depth"]),
            node_count=int(doc["node_count"]),
            feature_names=tuple(doc.get("feature_names", ())),
        )


def _plog2p(p: np.ndarray) -> np.ndarray:
    # p * log2(p) with the 0 * log2(0) = 0 convention; exact 0.0 at p in {0, 1}
    return p * np.log2(np.where(p > 0.0, p, 1.0))


def _impurity_arrays(pos: np.ndarray, n: np.ndarray, criterion: str) -> np.ndarray:
    p = pos / n
    q = (n - pos) / n
    if criterion == "entropy":
        return -(_plog2p(p) + _plog2p(q))
    return 1.0 - (p * p + q * q)


def impurity(class_counts, criterion: str) -> float:
    """Entropy or Gini impurity of a two-class count pair."""
    if criterion not in CRITERIA:
        raise ValueError(f"criterion must be one of {CRITERIA}, got {criterion!r}")
    a, b = class_counts
    if a < 0 or b < 0:
        raise ValueError("class counts must be nonnegative")
    n = a + b
    if n == 0:
        raise ValueError("impurity of an empty node is undefined")
    value = _impurity_arrays(np.float64(b), np.float64(n), criterion)
    return float(value)


def best_split(features, targets, criterion: str) -> Split | None:
    """Best (feature, threshold) by weighted impurity decrease, or None.

    Returns None when the node is already pure or when no feature has two
    distinct values. A zero-decrease split on an impure node is still
    returned: separable structure may only appear deeper down.

    All features are scanned in one vectorized pass; candidates and gains
    live in (n-1, k) arrays and the winner is taken feature-major, which
    realizes the tie-break order (lowest feature index, then lowest
    threshold) without any per-feature loop.
    """
    X = np.asarray(features, dtype=np.float64)
    y = np.asarray(targets, dtype=bool)
    n = y.size
    total_pos = int(np.count_nonzero(y))
    if total_pos in (0, n):
        return None
    order = np.argsort(X, axis=0)  # per-column sort
    values = np.take_along_axis(X, order, axis=0)
    lo, hi = values[:-1], values[1:]
    thresholds = 0.5 * (lo + hi)
    # a candidate needs two distinct neighbours; the midpoint guards cover
    # float collapse onto a neighbour for extreme adjacent values
    valid = (hi > lo) & (thresholds >= lo) & (thresholds < hi)
    # feature-major candidate order realizes the tie-break rule; impurities
    # are only computed at the (few) valid positions
    candidates = np.flatnonzero(np.ravel(valid, order="F"))
    if candidates.size == 0:
        return None
    left_pos_all = np.cumsum(y[order], axis=0)[:-1]
    left_pos = np.ravel(left_pos_all, order="F")[candidates].astype(np.float64)
    left_n = (candidates % (n - 1)).astype(np.float64) + 1.0
    right_n = n - left_n
    right_pos = total_pos - left_pos
    parent = float(_impurity_arrays(np.float64(total_pos), np.float64(n), criterion))
    children = (
        left_n * _impurity_arrays(left_pos, left_n, criterion)
        + right_n * _impurity_arrays(right_pos, right_n, criterion)
    ) / n
    gains = parent - children
    best = int(np.argmax(gains))  # first max: lowest feature, lowest threshold
    flat = int(candidates[best])
    split_at, feature = flat % (n - 1), flat // (n - 1)
    return Split(
        feature_index=int(feature),
        threshold=float(thresholds[split_at, feature]),
        impurity_decrease=float(gains[best]),
    )


def fit(train: BinaryLabeledDataset, config: TreeConfig | None = None) -> DecisionTree:
    """Grow a tree on the (already projected) training set.

    A node becomes a leaf when it is pure, when no candidate split exists,
    when it holds fewer than ``min_split_samples`` samples, or at
    ``max_depth``. Same inputs always give a structurally identical tree.
    """
    config = config or TreeConfig()
    X = np.ascontiguousarray(train.features, dtype=np.float64)
    y = np.asarray(train.targets, dtype=bool)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("training data must contain at least one record")
    if X.shape[1] == 0:
        raise ValueError("training data must contain at least one feature column")
    if X.shape[0] != y.size:
        raise ValueError("feature matrix and targets differ in length")

    max_depth_seen = 0
    node_count = 0

    def make_node(yn: np.ndarray) -> TreeNode:
        pos = int(np.count_nonzero(yn))
        neg = yn.size - pos
        return TreeNode(class_counts=(neg, pos), predicted=pos > neg)

    root = make_node(y)
    # explicit stack: tree depth on real traffic can exceed the interpreter's
    # recursion limit
    stack: list[tuple[TreeNode, np.ndarray, np.ndarray, int]] = [(root, X, y, 0)]
    while stack:
        node, Xn, yn, depth = stack.pop()
        node_count += 1
        max_depth_seen = max(max_depth_seen, depth)
        pos = node.class_counts[1]
        if pos in (0, yn.size):
            continue
        if config.max_depth is not None and depth >= config.max_depth:
            continue
        if yn.size < config.min_split_samples:
            continue
        split = best_split(Xn, yn, config.criterion)
        if split is None:
            continue
        go_left = Xn[:, split.feature_index] <= split.threshold
        node.feature_index = split.feature_index
        node.threshold = split.threshold
        node.impurity_decrease = split.impurity_decrease
        left_X, left_y = Xn[go_left], yn[go_left]
        right_X, right_y = Xn[~go_left], yn[~go_left]
        node.left = make_node(left_y)
        node.right = make_node(right_y)
        stack.append((node.left, left_X, left_y, depth + 1))
        stack.append((node.right, right_X, right_y, depth + 1))

    return DecisionTree(
        root=root,
        config=config,
        feature_count=X.shape[1],
        depth=max_depth_seen,
        node_count=node_count,
        feature_names=tuple(train.feature_names),
    )


def predict(tree: DecisionTree, features) -> bool:
    """Classify a single feature vector of the tree's projected width."""
    x = np.asarray(features, dtype=np.float64)
    if x.ndim != 1 or x.size != tree.feature_count:
        raise ValueError(
            f"expected a feature vector of length {tree.feature_count}, got shape {x.shape}"
        )
    node = tree.root
    while not node.is_leaf:
        node = node.left if x[node.feature_index] <= node.threshold else node.right
    return node.predicted


def predict_batch(tree: DecisionTree, features) -> np.ndarray:
    """Classify every row of a feature matrix; returns a boolean vector."""
    X = np.asarray(features, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != tree.feature_count:
        raise ValueError(
            f"expected a matrix with {tree.feature_count} columns, got shape {X.shape}"
        )
    out = np.empty(X.shape[0], dtype=bool)
    stack: list[tuple[TreeNode, np.ndarray]] = [(tree.root, np.arange(X.shape[0]))]
    while stack:
        node, idx = stack.pop()
        if idx.size == 0:
            continue
        if node.is_leaf:
            out[idx] = node.predicted
            continue
        go_left = X[idx, node.feature_index] <= node.threshold
        stack.append((node.left, idx[go_left]))
        stack.append((node.right, idx[~go_left]))
    return out
