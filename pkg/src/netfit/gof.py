"""Goodness-of-fit scoring and exploratory structure of the dataset table.

Three views: mean Canberra distances between same-name feature vectors
of different subcategories (how close each model's counterpart is to the
original), Pearson correlation matrices of the metrics per domain, and a
two-component PCA projection. All of them work on the seven topological
metrics; size is excluded because a counterpart always shares it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .metrics import METRIC_FIELDS


def canberra_distance(p, q):
    """Sum over coordinates of |p_i - q_i| / (|p_i| + |q_i|); 0/0 terms are 0."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape or p.ndim != 1 or p.size < 1:
        raise ValueError(f"vectors must share one dimension >= 1, got {p.shape} vs {q.shape}")
    total = 0.0
    for a, b in zip(p, q):
        denom = abs(a) + abs(b)
        if denom == 0.0:
            continue
        total += abs(a - b) / denom
    return total


@dataclass(frozen=True)
class DistanceMatrix:
    """Mean Canberra distances per domain between subcategory pairs.

    ``entries[domain][(sub_a, sub_b)]`` is (mean distance, matched pair
    count) or None when no same-name pair exists. ``unmatched`` lists
    (domain, name, missing subcategories) for incomplete name groups.
    """

    subcategories: tuple
    entries: dict
    unmatched: tuple

    def get(self, domain, sub_a, sub_b):
        return self.entries[domain].get((sub_a, sub_b))

    def to_csv_text(self, domain):
        lines = ["," + ",".join(self.subcategories)]
        for sub_a in self.subcategories:
            cells = []
            for sub_b in self.subcategories:
                entry = self.entries[domain].get((sub_a, sub_b))
                cells.append("" if entry is None else repr(entry[0]))
            lines.append(sub_a + "," + ",".join(cells))
        return "\n".join(lines) + "\n"


def mean_distance_matrix(table):
    """Mean Canberra distance between same-name rows of each subcategory pair."""
    subs = table.subcategories_present()
    by_domain_name = {}
    for row in table.rows:
        by_domain_name.setdefault(row.domain, {}).setdefault(row.name, {})[row.subcategory] = (
            row.features.metric_values()
        )
    entries = {}
    unmatched = []
    for domain in table.domains_present():
        domain_subs = tuple(
            s for s in subs if any(s in vecs for vecs in by_domain_name[domain].values())
        )
        for name in sorted(by_domain_name[domain]):
            missing = tuple(s for s in domain_subs if s not in by_domain_name[domain][name])
            if missing:
                unmatched.append((domain, name, missing))
        cell = {}
        for sub_a in subs:
            for sub_b in subs:
                dists = []
                for name in sorted(by_domain_name[domain]):
                    vecs = by_domain_name[domain][name]
                    if sub_a in vecs and sub_b in vecs:
                        dists.append(canberra_distance(vecs[sub_a], vecs[sub_b]))
                cell[(sub_a, sub_b)] = (float(np.mean(dists)), len(dists)) if dists else None
        entries[domain] = cell
    return DistanceMatrix(subcategories=subs, entries=entries, unmatched=tuple(unmatched))


@dataclass(frozen=True)
class CorrelationMatrix:
    """7x7 Pearson correlations between metrics, with degenerate columns flagged."""

    matrix: tuple
    degenerate: tuple  # metric names with zero variance (entries forced to 0)

    def to_csv_text(self):
        lines = ["," + ",".join(METRIC_FIELDS)]
        for name, row in zip(METRIC_FIELDS, self.matrix):
            lines.append(name + "," + ",".join(repr(v) for v in row))
        return "\n".join(lines) + "\n"


def correlation_matrix(table, domain=None):
    """Pearson correlations between the metric columns of the filtered table."""
    filtered = table.filter(domain=domain)
    if len(filtered) < 3:
        raise ValueError(f"need at least 3 rows for correlations, have {len(filtered)}")
    data = filtered.metric_matrix()
    centered = data - data.mean(axis=0)
    norms = np.sqrt((centered**2).sum(axis=0))
    degenerate = tuple(METRIC_FIELDS[i] for i in range(len(METRIC_FIELDS)) if norms[i] == 0.0)
    k = len(METRIC_FIELDS)
    out = np.zeros((k, k))
    for i in range(k):
        for j in range(k):
            if i == j:
                out[i, j] = 1.0
            elif norms[i] == 0.0 or norms[j] == 0.0:
                out[i, j] = 0.0
            else:
                out[i, j] = float(centered[:, i] @ centered[:, j] / (norms[i] * norms[j]))
    return CorrelationMatrix(
        matrix=tuple(tuple(row) for row in out),
        degenerate=degenerate,
    )


@dataclass(frozen=True)
class PcaProjection:
    """Rows projected on the two leading principal components."""

    rows: tuple  # (name, domain, subcategory, pc1, pc2)
    components: tuple  # 2 x 7 loadings
    explained_variance: tuple

    def to_csv_text(self):
        lines = ["name,domain,pc1,pc2"]
        for name, domain, _sub, pc1, pc2 in self.rows:
            lines.append(f"{name},{domain},{pc1!r},{pc2!r}")
        return "\n".join(lines) + "\n"


def standardized_metrics(table):
    """Metric matrix with zero-mean, unit-variance columns (flat columns -> 0)."""
    data = table.metric_matrix()
    mean = data.mean(axis=0)
    std = data.std(axis=0)
    out = np.zeros_like(data)
    nonzero = std > 0.0
    out[:, nonzero] = (data[:, nonzero] - mean[nonzero]) / std[nonzero]
    return out


def pca_project(table):
    """Project standardized metric rows onto the two leading eigenvectors.

    Signs follow the convention that each component's largest-magnitude
    loading is positive. Raises on fewer than 3 rows or rank-0 data.
    """
    if len(table) < 3:
        raise ValueError(f"need at least 3 rows for PCA, have {len(table)}")
    data = standardized_metrics(table)
    if not np.any(data):
        raise ValueError("rank-0 data: all metric columns are constant")
    cov = (data.T @ data) / data.shape[0]
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1]
    comps = []
    for idx in order[:2]:
        vec = eigvecs[:, idx]
        pivot = int(np.argmax(np.abs(vec)))
        if vec[pivot] < 0:
            vec = -vec
        comps.append(vec)
    projected = data @ np.stack(comps, axis=1)
    rows = tuple(
        (r.name, r.domain, r.subcategory, float(projected[i, 0]), float(projected[i, 1]))
        for i, r in enumerate(table.rows)
    )
    return PcaProjection(
        rows=rows,
        components=tuple(tuple(map(float, c)) for c in comps),
        explained_variance=tuple(float(eigvals[idx]) for idx in order[:2]),
    )
