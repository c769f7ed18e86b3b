"""Decision-tree and random-forest classification of network origin.

CART trees with Gini impurity, bagged into forests with per-split
feature subsampling. Evaluation is stratified k-fold with pooled
predictions; multi-class tasks report accuracy plus the confusion
matrix, the binary real-vs-model task reports AUC.

Explanatory variables are the six topological metrics (assortativity,
clustering, average degree, max eigenvector centrality, path length,
degree skewness) — density and size carry domain-size information and
stay out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import seeds

FEATURE_FIELDS = (
    "assort",
    "avg_clust",
    "avg_deg",
    "max_eigenv_c",
    "avg_path_length",
    "skew_deg_dist",
)

TASKS = ("domain", "category", "subcategory")


class ClassSupportError(ValueError):
    """A class has too few samples for the requested evaluation."""


@dataclass(frozen=True)
class LabeledDataset:
    """Feature rows (fixed column order) with integer class labels."""

    features: np.ndarray
    labels: np.ndarray
    class_names: tuple
    feature_names: tuple = FEATURE_FIELDS

    def __post_init__(self):
        if len(self.features) != len(self.labels):
            raise ValueError("feature/label row counts differ")

    def __len__(self):
        return len(self.labels)


def dataset_from_table(table, label_by):
    """LabeledDataset from a DatasetTable, labeling rows by the given column."""
    names = sorted({getattr(r, label_by) for r in table.rows})
    index = {n: i for i, n in enumerate(names)}
    feats = np.array(
        [[getattr(r.features, f) for f in FEATURE_FIELDS] for r in table.rows], dtype=float
    )
    labels = np.array([index[getattr(r, label_by)] for r in table.rows], dtype=np.int64)
    return LabeledDataset(features=feats, labels=labels, class_names=tuple(names))


# ---------------------------------------------------------------------------
# Stratified folds


def stratified_kfold(labels, k, seed=0):
    """k disjoint index folds with per-class counts equal up to 1.

    Members of each class are shuffled and dealt to folds round-robin;
    the starting fold rotates with the running sample count so overall
    fold sizes stay balanced too.
    """
    labels = np.asarray(labels)
    n = len(labels)
    if k < 2:
        raise ValueError("need at least 2 folds")
    if k > n:
        raise ValueError(f"cannot split {n} samples into {k} folds")
    rng = np.random.default_rng(seed)
    folds = [[] for _ in range(k)]
    assigned = 0
    for cls in np.unique(labels):
        members = np.flatnonzero(labels == cls)
        members = members[rng.permutation(len(members))]
        start = assigned % k
        for i, idx in enumerate(members):
            folds[(start + i) % k].append(int(idx))
        assigned += len(members)
    return [np.array(sorted(f), dtype=np.int64) for f in folds]


# ---------------------------------------------------------------------------
# CART decision tree


@dataclass(frozen=True)
class TreeNode:
    counts: tuple  # class counts at this node
    feature: int = -1  # -1 marks a leaf
    threshold: float = 0.0
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None

    @property
    def is_leaf(self):
        return self.feature < 0


@dataclass(frozen=True)
class TreeConfig:
    max_depth: int | None = None
    min_samples_split: int = 2
    features_per_split: int | None = None  # None = all features


def _gini_split_score(col, labels, n_classes):
    """Best (weighted Gini, threshold) for one feature column, or None.

    Thresholds are midpoints between consecutive distinct sorted values;
    the scan keeps the first (smallest-threshold) optimum.
    """
    order = np.argsort(col, kind="stable")
    values = col[order]
    classes = labels[order]
    n = len(values)
    left = np.zeros(n_classes)
    right = np.bincount(classes, minlength=n_classes).astype(float)
    best = None
    for i in range(n - 1):
        c = classes[i]
        left[c] += 1
        right[c] -= 1
        if values[i + 1] <= values[i]:
            continue
        nl = i + 1
        nr = n - nl
        gini_l = 1.0 - float(left @ left) / (nl * nl)
        gini_r = 1.0 - float(right @ right) / (nr * nr)
        score = (nl * gini_l + nr * gini_r) / n
        if best is None or score < best[0] - 1e-12:
            best = (score, (values[i] + values[i + 1]) / 2.0)
    return best


def _grow_tree(feats, labels, n_classes, config, depth, rng):
    counts = np.bincount(labels, minlength=n_classes)
    node_counts = tuple(int(c) for c in counts)
    n = len(labels)
    pure = int(np.max(counts)) == n
    if (
        pure
        or n < config.min_samples_split
        or (config.max_depth is not None and depth >= config.max_depth)
    ):
        return TreeNode(counts=node_counts)
    d = feats.shape[1]
    if config.features_per_split is not None and config.features_per_split < d:
        candidates = np.sort(rng.choice(d, size=config.features_per_split, replace=False))
    else:
        candidates = np.arange(d)
    best = None
    for f in candidates:
        scored = _gini_split_score(feats[:, f], labels, n_classes)
        if scored is None:
            continue
        score, threshold = scored
        if best is None or score < best[0] - 1e-12:
            best = (score, int(f), threshold)
    if best is None:
        return TreeNode(counts=node_counts)  # no feature separates the rows
    _, f, threshold = best
    mask = feats[:, f] <= threshold
    left = _grow_tree(feats[mask], labels[mask], n_classes, config, depth + 1, rng)
    right = _grow_tree(feats[~mask], labels[~mask], n_classes, config, depth + 1, rng)
    return TreeNode(counts=node_counts, feature=f, threshold=threshold, left=left, right=right)


@dataclass(frozen=True)
class TreeModel:
    root: TreeNode
    n_classes: int
    config: TreeConfig

    def _leaf(self, row):
        node = self.root
        while not node.is_leaf:
            node = node.left if row[node.feature] <= node.threshold else node.right
        return node

    def predict(self, rows):
        rows = np.atleast_2d(np.asarray(rows, dtype=float))
        return np.array([int(np.argmax(self._leaf(r).counts)) for r in rows], dtype=np.int64)

    def score(self, rows, positive=1):
        """Per-row fraction of the leaf's samples in the positive class."""
        rows = np.atleast_2d(np.asarray(rows, dtype=float))
        out = []
        for r in rows:
            counts = self._leaf(r).counts
            total = sum(counts)
            out.append(counts[positive] / total if total else 0.0)
        return np.array(out)

    def split_feature_counts(self):
        counts = [0] * max(1, self._max_feature() + 1)

        def walk(node):
            if node.is_leaf:
                return
            counts[node.feature] += 1
            walk(node.left)
            walk(node.right)

        walk(self.root)
        return tuple(counts)

    def _max_feature(self):
        best = 0

        def walk(node):
            nonlocal best
            if node.is_leaf:
                return
            best = max(best, node.feature)
            walk(node.left)
            walk(node.right)

        walk(self.root)
        return best


def train_tree(dataset, config=None, seed=0):
    """Greedy CART on the full dataset (deterministic unless subsampling)."""
    if len(dataset) < 1:
        raise ValueError("cannot train on an empty dataset")
    config = config or TreeConfig()
    rng = np.random.default_rng(seed)
    root = _grow_tree(
        dataset.features, dataset.labels, len(dataset.class_names), config, 0, rng
    )
    return TreeModel(root=root, n_classes=len(dataset.class_names), config=config)


# ---------------------------------------------------------------------------
# Random forest


@dataclass(frozen=True)
class ForestConfig:
    trees: int = 100
    features_per_split: int | None = None  # None = floor(sqrt(d))
    bootstrap: bool = True
    max_depth: int | None = None


@dataclass(frozen=True)
class ForestModel:
    trees: tuple
    n_classes: int
    config: ForestConfig
    seed: int

    def _votes(self, rows):
        rows = np.atleast_2d(np.asarray(rows, dtype=float))
        votes = np.zeros((len(rows), self.n_classes), dtype=np.int64)
        for tree in self.trees:
            preds = tree.predict(rows)
            votes[np.arange(len(rows)), preds] += 1
        return votes

    def predict(self, rows):
        return np.argmax(self._votes(rows), axis=1)

    def score(self, rows, positive=1):
        """Vote fraction for the positive class, used as the AUC score."""
        votes = self._votes(rows)
        return votes[:, positive] / len(self.trees)

    def split_feature_counts(self):
        total = None
        for tree in self.trees:
            counts = tree.split_feature_counts()
            if total is None:
                total = list(counts)
            else:
                for i, c in enumerate(counts):
                    if i >= len(total):
                        total.append(0)
                    total[i] += c
        return tuple(total or ())


def train_forest(dataset, config=None, seed=0):
    """Bagged CART trees with fresh random feature subsets at every split."""
    if len(dataset) < 2:
        raise ValueError("forest training needs at least 2 samples")
    config = config or ForestConfig()
    d = dataset.features.shape[1]
    per_split = config.features_per_split
    if per_split is None:
        per_split = max(1, int(math.isqrt(d)))
    tree_config = TreeConfig(max_depth=config.max_depth, features_per_split=per_split)
    trees = []
    n = len(dataset)
    for i in range(config.trees):
        rng = np.random.default_rng(seeds.xor_index(seed, i))
        if config.bootstrap:
            sample = rng.integers(n, size=n)
        else:
            sample = np.arange(n)
        root = _grow_tree(
            dataset.features[sample],
            dataset.labels[sample],
            len(dataset.class_names),
            tree_config,
            0,
            rng,
        )
        trees.append(TreeModel(root=root, n_classes=len(dataset.class_names), config=tree_config))
    return ForestModel(
        trees=tuple(trees), n_classes=len(dataset.class_names), config=config, seed=seed
    )


# ---------------------------------------------------------------------------
# Evaluation metrics


def confusion_matrix(predicted, actual, n_classes):
    """M[i][j] = count of samples predicted i whose actual class is j."""
    m = np.zeros((n_classes, n_classes), dtype=np.int64)
    for p, a in zip(predicted, actual):
        m[int(p), int(a)] += 1
    return m


def accuracy(matrix):
    """Diagonal total over grand total of a square confusion matrix."""
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.size == 0:
        raise ValueError("confusion matrix must be square and non-empty")
    total = int(m.sum())
    if total == 0:
        raise ValueError("confusion matrix is all zeros")
    return float(np.trace(m)) / total


def roc_auc(scores, labels):
    """AUC as the probability a random positive outscores a random negative.

    Computed from average ranks, which credits ties 0.5 and equals the
    area under the threshold-swept ROC curve.
    """
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    pos = scores[labels == 1]
    neg = scores[labels == 0]
    if len(pos) == 0 or len(neg) == 0:
        raise ValueError("AUC needs both classes present")
    order = np.argsort(scores, kind="stable")
    ranks = np.empty(len(scores), dtype=float)
    i = 0
    sorted_scores = scores[order]
    while i < len(scores):
        j = i
        while j + 1 < len(scores) and sorted_scores[j + 1] == sorted_scores[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0  # average of 1-based ranks
        i = j + 1
    rank_sum = float(ranks[labels == 1].sum())
    n_pos, n_neg = len(pos), len(neg)
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


# ---------------------------------------------------------------------------
# Task runner


@dataclass(frozen=True)
class EvalReport:
    """Pooled and per-fold results of one classification task."""

    task: str
    model: str
    domain: str | None
    class_names: tuple
    fold_accuracies: tuple
    pooled_accuracy: float
    mean_fold_accuracy: float
    confusion: tuple
    auc: float | None
    hyperparameters: dict
    seed: int
    feature_split_counts: tuple = ()

    def to_json_obj(self):
        return {
            "task": self.task,
            "model": self.model,
            "domain": self.domain,
            "class_names": list(self.class_names),
            "fold_accuracies": list(self.fold_accuracies),
            "pooled_accuracy": self.pooled_accuracy,
            "mean_fold_accuracy": self.mean_fold_accuracy,
            "confusion_matrix": [list(row) for row in self.confusion],
            "auc": self.auc,
            "hyperparameters": self.hyperparameters,
            "seed": self.seed,
            "feature_names": list(FEATURE_FIELDS),
            "feature_split_counts": list(self.feature_split_counts),
        }


def _task_table(table, task, domain):
    if task == "domain":
        return table.filter(category="real"), "domain"
    if task in ("category", "subcategory"):
        if domain is None:
            raise ValueError(f"{task} task runs one domain at a time; pass domain=")
        # WS_STD rows excluded: only the clustering-fitted WS variant competes
        return table.filter(domain=domain, exclude_subcategories=("WS_STD",)), task
    raise ValueError(f"unknown task {task!r}")


def run_task(table, task, model="forest", k=5, seed=0, domain=None, forest_config=None,
             tree_config=None):
    """Stratified k-fold evaluation of one classification problem.

    ``domain`` selects the subtable for the category/subcategory tasks.
    The binary category task reports AUC (positive class = "model") with
    accuracy secondary; multi-class tasks report accuracy plus the pooled
    confusion matrix.
    """
    if model not in ("tree", "forest"):
        raise ValueError(f"unknown model {model!r}")
    subtable, label_by = _task_table(table, task, domain)
    data = dataset_from_table(subtable, label_by)
    if len(data.class_names) < 2:
        raise ClassSupportError(f"need at least 2 classes, have {list(data.class_names)}")
    counts = np.bincount(data.labels, minlength=len(data.class_names))
    for name, count in zip(data.class_names, counts):
        if count < 2:
            raise ClassSupportError(f"class {name!r} has only {int(count)} sample(s)")
    binary = task == "category"
    positive = data.class_names.index("model") if binary else 1
    folds = stratified_kfold(data.labels, k, seed=seeds.derive(seed, task, "folds"))
    n = len(data)
    pooled_pred = np.zeros(n, dtype=np.int64)
    pooled_score = np.zeros(n, dtype=float)
    fold_accs = []
    split_counts = None
    for i, test_idx in enumerate(folds):
        train_mask = np.ones(n, dtype=bool)
        train_mask[test_idx] = False
        train = LabeledDataset(
            features=data.features[train_mask],
            labels=data.labels[train_mask],
            class_names=data.class_names,
        )
        fold_seed = seeds.derive(seed, task, "fold", i)
        if model == "forest":
            clf = train_forest(train, config=forest_config, seed=fold_seed)
        else:
            clf = train_tree(train, config=tree_config, seed=fold_seed)
        preds = clf.predict(data.features[test_idx])
        pooled_pred[test_idx] = preds
        if binary:
            pooled_score[test_idx] = clf.score(data.features[test_idx], positive=positive)
        fold_accs.append(float(np.mean(preds == data.labels[test_idx])))
        counts_i = clf.split_feature_counts()
        if split_counts is None:
            split_counts = list(counts_i) + [0] * (len(FEATURE_FIELDS) - len(counts_i))
        else:
            for j, c in enumerate(counts_i):
                split_counts[j] += c
    conf = confusion_matrix(pooled_pred, data.labels, len(data.class_names))
    auc = roc_auc(pooled_score, (data.labels == positive).astype(int)) if binary else None
    if model == "forest":
        cfg = forest_config or ForestConfig()
        per_split = cfg.features_per_split or max(1, int(math.isqrt(len(FEATURE_FIELDS))))
        hyper = {
            "trees": cfg.trees,
            "features_per_split": per_split,
            "bootstrap": cfg.bootstrap,
            "max_depth": cfg.max_depth,
            "folds": k,
        }
    else:
        cfg = tree_config or TreeConfig()
        hyper = {
            "max_depth": cfg.max_depth,
            "min_samples_split": cfg.min_samples_split,
            "folds": k,
        }
    return EvalReport(
        task=task,
        model=model,
        domain=domain,
        class_names=data.class_names,
        fold_accuracies=tuple(fold_accs),
        pooled_accuracy=accuracy(conf),
        mean_fold_accuracy=float(np.mean(fold_accs)),
        confusion=tuple(tuple(int(x) for x in row) for row in conf),
        auc=auc,
        hyperparameters=hyper,
        seed=seed,
        feature_split_counts=tuple(split_counts or ()),
    )
