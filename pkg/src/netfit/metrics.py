"""Non-redundant graph metric suite and feature-vector assembly.

Seven topological measures (density, assortativity, average local
clustering, average degree, maximum eigenvector centrality, normalized
average path length, degree-distribution skewness) plus the node count
form the feature vector used throughout the pipeline. All functions are
pure; results do not depend on node labeling.

Conventions, chosen so every feature row is finite:
  - local clustering of a node with degree < 2 is 0;
  - assortativity of a graph with zero remaining-degree variance
    (regular graphs) is 0, flagged degenerate;
  - skewness of a constant degree sequence is 0.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .jdm import JointDegreeMatrix

#: CSV column order for feature rows; the last three are optional.
CSV_HEADER = (
    "name",
    "size",
    "density",
    "assort",
    "avg_clust",
    "avg_deg",
    "max_eigenv_c",
    "avg_path_length",
    "skew_deg_dist",
    "domain",
    "category",
    "subcategory",
)

#: Metric fields entering distance / correlation / PCA computations
#: (size is excluded: generated counterparts share it by construction).
METRIC_FIELDS = (
    "density",
    "assort",
    "avg_clust",
    "avg_deg",
    "max_eigenv_c",
    "avg_path_length",
    "skew_deg_dist",
)


class MetricDomainError(ValueError):
    """Raised when a metric's precondition (n or m too small) fails."""


class PowerIterationError(RuntimeError):
    """Power iteration failed to converge within the iteration cap."""

    def __init__(self, residual, iterations):
        super().__init__(
            f"power iteration did not converge after {iterations} iterations "
            f"(residual {residual:.3e})"
        )
        self.residual = residual
        self.iterations = iterations


@dataclass(frozen=True)
class FeatureVector:
    """The eight numeric attributes of one graph."""

    size: int
    density: float
    assort: float
    avg_clust: float
    avg_deg: float
    max_eigenv_c: float
    avg_path_length: float
    skew_deg_dist: float

    def metric_values(self):
        """The seven topological metrics (size excluded) in field order."""
        return tuple(getattr(self, f) for f in METRIC_FIELDS)

    def as_dict(self):
        d = {"size": self.size}
        d.update({f: getattr(self, f) for f in METRIC_FIELDS})
        return d


def density(g):
    """Edges over the edge count of the complete graph on the same nodes."""
    n = g.node_count
    if n < 2:
        raise MetricDomainError("density requires at least 2 nodes")
    return g.edge_count / (n * (n - 1) / 2)


def average_degree(g):
    n = g.node_count
    if n < 1:
        raise MetricDomainError("average degree requires at least 1 node")
    return 2 * g.edge_count / n


def _edge_degree_pair_counts(g):
    """Counter of (deg(u), deg(v)) over undirected edges, canonical order.

    Aggregating by degree class before summing makes the downstream
    moments independent of edge order, so two graphs with equal joint
    degree matrices produce bitwise-identical assortativity values.
    """
    deg = g.degree_array
    pairs = Counter()
    for u, v in g.edges():
        a, b = int(deg[u]), int(deg[v])
        if a > b:
            a, b = b, a
        pairs[(a, b)] += 1
    return pairs


def assortativity(g):
    """Pearson correlation of remaining degrees across linked node pairs.

    Each undirected edge contributes both orientations, matching the
    e_{j,k}/q_k formulation. Returns 0.0 for degenerate (zero variance)
    remaining-degree distributions; see :func:`assortativity_is_degenerate`.
    """
    value, _ = _assortativity_flagged(g)
    return value


def assortativity_is_degenerate(g):
    """True when the remaining-degree variance is zero (e.g. regular graphs)."""
    _, degenerate = _assortativity_flagged(g)
    return degenerate


def _assortativity_flagged(g):
    if g.edge_count < 1:
        raise MetricDomainError("assortativity requires at least 1 edge")
    pairs = _edge_degree_pair_counts(g)
    total = 2 * g.edge_count  # directed edge instances
    # Remaining degrees j = deg-1; marginals are symmetric by construction.
    s1 = 0.0  # sum of j over instances
    s2 = 0.0  # sum of j^2
    sp = 0.0  # sum of j*k products
    for (a, b), c in sorted(pairs.items()):
        j, k = a - 1, b - 1
        s1 += c * (j + k)
        s2 += c * (j * j + k * k)
        sp += c * (2 * j * k)
    mean = s1 / total
    var = s2 / total - mean * mean
    if var <= 0.0:
        return 0.0, True
    cov = sp / total - mean * mean
    return cov / var, False


def local_clustering(g, u):
    """Fraction of neighbor pairs of u that are themselves linked (0 if deg<2)."""
    nbrs = g.adjacency[u]
    d = len(nbrs)
    if d < 2:
        return 0.0
    sets = g.neighbor_sets
    mine = sets[u]
    links = 0
    for v in nbrs:
        links += len(mine & sets[v])
    # links counts each neighbor-neighbor edge twice
    return links / (d * (d - 1))


def average_clustering(g):
    """Mean local clustering coefficient over all nodes."""
    n = g.node_count
    if n < 1:
        raise MetricDomainError("average clustering requires at least 1 node")
    return sum(local_clustering(g, u) for u in range(n)) / n


def max_eigenvector_centrality(g, tol=1e-10, max_iter=10_000):
    """Largest entry of the unit-norm principal eigenvector of the adjacency.

    Power iteration from the uniform positive vector. Iterates on A+I —
    same eigenvectors, but strictly dominant top eigenvalue, so bipartite
    graphs converge too. Stops when the A-residual ||Av - λv|| drops
    below ``tol``; raises :class:`PowerIterationError` at the cap.
    """
    n = g.node_count
    if g.edge_count < 1:
        raise MetricDomainError("eigenvector centrality requires at least 1 edge")
    src, dst = g.edge_endpoints
    x = np.full(n, 1.0 / math.sqrt(n))
    residual = math.inf
    for _ in range(max_iter):
        ax = np.bincount(dst, weights=x[src], minlength=n)
        lam = float(x @ ax)
        diff = ax - lam * x
        residual = float(np.sqrt(diff @ diff))
        if residual <= tol:
            return float(x.max())
        y = ax + x  # (A + I) x
        x = y / np.sqrt(y @ y)
    raise PowerIterationError(residual, max_iter)


def _distance_totals(g):
    """(sum of distances, count) over ordered reachable pairs u != v.

    Runs all BFS sweeps simultaneously: each node carries a bitmask of
    sources that have reached it, and one synchronous round advances
    every frontier by one hop. Cost is O(diameter * m) big-int ops.
    """
    n = g.node_count
    adj = g.adjacency
    reach = [1 << u for u in range(n)]
    alive = range(n)
    total = 0
    pairs = 0
    dist = 0
    while alive:
        dist += 1
        nxt = {}
        for u in alive:
            acc = reach[u]
            for v in adj[u]:
                acc |= reach[v]
            if acc != reach[u]:
                nxt[u] = acc
        if not nxt:
            break
        touched = set()
        for u, acc in nxt.items():
            new = (acc ^ reach[u]).bit_count()
            total += dist * new
            pairs += new
            reach[u] = acc
            touched.update(adj[u])
        # only nodes adjacent to a change can change next round
        alive = sorted(touched)
    return total, pairs


def average_path_length_normalized(g):
    """Mean distance over ordered same-component pairs, divided by n-1.

    Distances are pooled across components (pairs in different components
    are simply not counted), per the normalized path-length attribute.
    """
    n = g.node_count
    if g.edge_count < 1:
        raise MetricDomainError("average path length requires at least 1 edge")
    total, pairs = _distance_totals(g)
    if pairs == 0:
        raise MetricDomainError("no reachable pair of distinct nodes")
    return (total / pairs) / (n - 1)


def degree_skewness(g):
    """Population skewness g1 = m3 / m2^(3/2) of the degree sequence."""
    n = g.node_count
    if n < 1:
        raise MetricDomainError("degree skewness requires at least 1 node")
    counts = Counter(int(d) for d in g.degree_array)
    mean = sum(k * c for k, c in sorted(counts.items())) / n
    m2 = 0.0
    m3 = 0.0
    for k, c in sorted(counts.items()):
        d = k - mean
        m2 += c * d * d
        m3 += c * d * d * d
    m2 /= n
    m3 /= n
    if m2 <= 0.0:
        return 0.0
    return m3 / m2**1.5


def feature_vector(g):
    """All eight attributes of g as a :class:`FeatureVector`."""
    if g.node_count < 2 or g.edge_count < 1:
        raise MetricDomainError("feature vector requires n >= 2 and m >= 1")
    return FeatureVector(
        size=g.node_count,
        density=density(g),
        assort=assortativity(g),
        avg_clust=average_clustering(g),
        avg_deg=average_degree(g),
        max_eigenv_c=max_eigenvector_centrality(g),
        avg_path_length=average_path_length_normalized(g),
        skew_deg_dist=degree_skewness(g),
    )


def joint_degree_matrix(g):
    """JDM of g: per (k, l) degree pair, the number of joining edges."""
    if g.edge_count < 1:
        raise MetricDomainError("joint degree matrix requires at least 1 edge")
    pairs = _edge_degree_pair_counts(g)
    counts = Counter(int(d) for d in g.degree_array if d > 0)
    return JointDegreeMatrix(entries=dict(pairs), degree_counts=dict(counts))
