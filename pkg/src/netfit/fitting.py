"""Per-model parameter fitting against a target graph.

Closed-form parameters (sizes, degree-derived integers, community edge
densities, the joint degree matrix) are computed directly. The remaining
free probability of WS, CBA and DD is found by minimizing the absolute
gap of the model's designated metric (clustering, clustering, density)
over a coarse grid followed by golden-section refinement; stochastic
objectives are smoothed by averaging a fixed number of generation
replicates per candidate.

Community detection for the community-structure model is the built-in
multi-level modularity optimizer (:func:`louvain`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import seeds
from .generators import (
    CBAParams,
    CommunityParams,
    DDParams,
    TwoKParams,
    WSParams,
    generate_cba,
    generate_dd,
    generate_ws,
)
from .metrics import average_clustering, density, joint_degree_matrix

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

DEFAULT_BUDGET = 60
DEFAULT_REPLICATES = 5


class UnfittableError(ValueError):
    """The target graph cannot supply valid parameters for the model."""


@dataclass(frozen=True)
class FitReport:
    """Outcome of fitting one model to one graph."""

    model: str
    params: object
    objective_value: float
    evaluations: int
    replicates_per_eval: int
    seed: int = 0
    notes: tuple = ()

    def to_json_obj(self):
        from .generators import params_to_json_obj

        obj = params_to_json_obj(self.params, model="WS" if self.model == "WS_STD" else self.model)
        return {
            "model": self.model,
            "params": obj["params"],
            "objective_value": self.objective_value,
            "evaluations": self.evaluations,
            "replicates_per_eval": self.replicates_per_eval,
            "master_seed": self.seed,
            "notes": list(self.notes),
        }


# ---------------------------------------------------------------------------
# Smoothed scalar search


def eval_seed(master, q, replicate):
    """Seed of one smoothing replicate at candidate q (replayable)."""
    return seeds.derive(master, format(q, ".17g"), replicate)


def smoothed_value(simulate, q, replicates, master):
    """Mean of ``replicates`` simulations at q with replayable seeds."""
    acc = 0.0
    for r in range(replicates):
        acc += simulate(q, eval_seed(master, q, r))
    return acc / replicates


class _Search:
    """Budgeted argmin over a probability with replicate smoothing.

    Replicate seeds derive from (master seed, candidate, index), so a
    report's objective can be replayed exactly afterwards. Tracks every
    evaluated candidate; ties resolve toward the smaller parameter.
    """

    def __init__(self, simulate, target, budget, replicates, seed):
        self.simulate = simulate  # (q, seed) -> metric value
        self.target = target
        self.budget = budget
        self.replicates = replicates
        self.seed = seed
        self.values = {}

    def evaluate(self, q):
        if q in self.values:
            return self.values[q]
        if len(self.values) >= self.budget:
            return None
        objective = abs(self.target - smoothed_value(self.simulate, q, self.replicates, self.seed))
        self.values[q] = objective
        return objective

    def best(self):
        return min(self.values.items(), key=lambda item: (item[1], item[0]))

    def refine(self, lo, hi, log_space=False):
        """Golden-section inside [lo, hi] until the budget is exhausted."""
        tf = math.log10 if log_space else (lambda x: x)
        inv = (lambda x: 10.0**x) if log_space else (lambda x: x)
        a, b = tf(lo), tf(hi)
        c = b - GOLDEN * (b - a)
        d = a + GOLDEN * (b - a)
        fc = self.evaluate(inv(c))
        fd = self.evaluate(inv(d))
        while fc is not None and fd is not None and (b - a) > 1e-4:
            if fc <= fd:
                b, d, fd = d, c, fc
                c = b - GOLDEN * (b - a)
                fc = self.evaluate(inv(c))
            else:
                a, c, fc = c, d, fd
                d = a + GOLDEN * (b - a)
                fd = self.evaluate(inv(d))

    def run(self, grid, log_space=False):
        for q in grid:
            self.evaluate(q)
        best_q, _ = self.best()
        qs = sorted(self.values)
        i = qs.index(best_q)
        lo = qs[max(i - 1, 0)]
        hi = qs[min(i + 1, len(qs) - 1)]
        if lo < hi:
            self.refine(lo, hi, log_space=log_space)
        return self.best()


def _round_half_up(x):
    return math.floor(x + 0.5)


def _nearest_even(x):
    """Even integer closest to x; exact ties round up."""
    return 2 * _round_half_up(x / 2.0)


def _degree_std(g):
    return float(np.std(g.degree_array))


# ---------------------------------------------------------------------------
# Model fits


def ws_base_params(g):
    """(n, K) for a WS fit: K is the average degree coerced to even >= 2."""
    n = g.node_count
    avg_deg = 2 * g.edge_count / n
    if avg_deg < 1:
        raise UnfittableError(f"average degree {avg_deg:.3f} < 1, WS not fittable")
    K = max(2, _nearest_even(avg_deg))
    notes = []
    if K >= n:
        K = n - 2 if n % 2 == 0 else n - 1
        notes.append(f"K clamped to {K} (rounded average degree reached n)")
    if K < 2:
        raise UnfittableError(f"graph too small for a WS lattice (n={n})")
    return n, K, tuple(notes)


def fit_ws(g, mode="clustering", budget=DEFAULT_BUDGET, replicates=DEFAULT_REPLICATES, seed=0):
    """Fit WS by matching clustering ("clustering") or degree std ("degree_std").

    The rewiring probability is searched over [0.001, 1] (the lower bound
    avoids the degenerate lattice) on a 17-point log grid plus refinement.
    """
    if mode not in ("clustering", "degree_std"):
        raise ValueError(f"unknown WS fit mode {mode!r}")
    n, K, notes = ws_base_params(g)
    measure = average_clustering if mode == "clustering" else _degree_std
    target = measure(g)

    def simulate(q, s):
        return measure(generate_ws(WSParams(n=n, K=K, p=q), s))

    search = _Search(simulate, target, budget, replicates, seed)
    grid = np.logspace(-3.0, 0.0, 17)
    best_q, best_obj = search.run([float(q) for q in grid], log_space=True)
    return FitReport(
        model="WS" if mode == "clustering" else "WS_STD",
        params=WSParams(n=n, K=K, p=best_q),
        objective_value=best_obj,
        evaluations=len(search.values),
        replicates_per_eval=replicates,
        seed=seed,
        notes=notes,
    )


def fit_cba(g, budget=DEFAULT_BUDGET, replicates=DEFAULT_REPLICATES, seed=0):
    """Fit CBA: m from the edge/node ratio, p by matching clustering."""
    n = g.node_count
    if n < 2:
        raise UnfittableError("CBA needs at least 2 nodes")
    m = max(1, _round_half_up(g.edge_count / n))
    notes = []
    if m >= n:
        m = n - 1
        notes.append(f"m clamped to {m} (n={n})")
    target = average_clustering(g)

    def simulate(q, s):
        return average_clustering(generate_cba(CBAParams(n=n, m=m, p=q), s))

    search = _Search(simulate, target, budget, replicates, seed)
    grid = [i / 10.0 for i in range(11)]
    best_q, best_obj = search.run(grid)
    return FitReport(
        model="CBA",
        params=CBAParams(n=n, m=m, p=best_q),
        objective_value=best_obj,
        evaluations=len(search.values),
        replicates_per_eval=replicates,
        seed=seed,
        notes=tuple(notes),
    )


def fit_dd(g, budget=DEFAULT_BUDGET, replicates=DEFAULT_REPLICATES, seed=0):
    """Fit DD: p by matching graph density on a 0.02-step grid."""
    n = g.node_count
    if n < 2:
        raise UnfittableError("DD needs at least 2 nodes")
    target = density(g)

    def simulate(q, s):
        h = generate_dd(DDParams(n=n, p=q), s)
        return density(h)

    search = _Search(simulate, target, budget, replicates, seed)
    grid = [round(0.02 * i, 2) for i in range(1, 51)]
    best_q, best_obj = search.run(grid)
    return FitReport(
        model="DD",
        params=DDParams(n=n, p=best_q),
        objective_value=best_obj,
        evaluations=len(search.values),
        replicates_per_eval=replicates,
        seed=seed,
    )


# ---------------------------------------------------------------------------
# Louvain community detection


@dataclass(frozen=True)
class Partition:
    """Community ids (dense, 0..c-1) per node plus achieved modularity."""

    community: tuple
    modularity: float

    @property
    def count(self):
        return max(self.community) + 1 if self.community else 0

    def sizes(self):
        counts = [0] * self.count
        for c in self.community:
            counts[c] += 1
        return tuple(counts)


def modularity(g, community):
    """Q = sum_c [e_c/m - (d_c/2m)^2] for the given node->community map."""
    m = g.edge_count
    if m < 1:
        raise ValueError("modularity needs at least one edge")
    n_comm = max(community) + 1
    internal = [0] * n_comm
    degree_sum = [0] * n_comm
    for u in range(g.node_count):
        degree_sum[community[u]] += g.degree(u)
    for u, v in g.edges():
        if community[u] == community[v]:
            internal[community[u]] += 1
    return sum(internal[c] / m - (degree_sum[c] / (2 * m)) ** 2 for c in range(n_comm))


def _local_moves(n, weights, degrees, total_weight, order):
    """One Louvain level: move nodes between communities until no gain.

    Self-loop weights shift every candidate's gain equally, so they do
    not appear in the comparison.
    """
    comm = list(range(n))
    tot = degrees[:]  # degree sum per community
    improved_any = False
    moved = True
    while moved:
        moved = False
        for u in order:
            cu = comm[u]
            ku = degrees[u]
            # detach u
            tot[cu] -= ku
            comm[u] = -1
            link = {}
            for v, w in weights[u].items():
                c = comm[v]
                if c >= 0:
                    link[c] = link.get(c, 0.0) + w
            best_c = cu
            best_gain = link.get(cu, 0.0) - tot[cu] * ku / (2.0 * total_weight)
            for c in sorted(link):
                if c == cu:
                    continue
                gain = link[c] - tot[c] * ku / (2.0 * total_weight)
                if gain > best_gain + 1e-12:
                    best_gain = gain
                    best_c = c
            comm[u] = best_c
            tot[best_c] += ku
            if best_c != cu:
                moved = True
                improved_any = True
    return comm, improved_any


def louvain(g, seed=0):
    """Multi-level modularity optimization (local moves + aggregation).

    Sweep order is shuffled once per level from the seed; everything else
    is deterministic, so the partition is reproducible.
    """
    if g.edge_count < 1:
        raise ValueError("louvain needs at least one edge")
    rng = np.random.default_rng(seed)
    n = g.node_count
    total_weight = float(g.edge_count)
    # level graph state
    weights = [dict() for _ in range(n)]
    for u, v in g.edges():
        weights[u][v] = weights[u].get(v, 0.0) + 1.0
        weights[v][u] = weights[v].get(u, 0.0) + 1.0
    loops = [0.0] * n
    membership = list(range(n))  # original node -> current level community

    while True:
        level_n = len(weights)
        degrees = [sum(weights[u].values()) + 2.0 * loops[u] for u in range(level_n)]
        order = [int(i) for i in rng.permutation(level_n)]
        comm, improved = _local_moves(level_n, weights, degrees, total_weight, order)
        # renumber communities densely by first appearance in node order
        remap = {}
        for u in range(level_n):
            if comm[u] not in remap:
                remap[comm[u]] = len(remap)
            comm[u] = remap[comm[u]]
        membership = [comm[membership[orig]] for orig in range(n)]
        if not improved or len(remap) == level_n:
            break
        # aggregate level graph
        new_n = len(remap)
        new_weights = [dict() for _ in range(new_n)]
        new_loops = [0.0] * new_n
        for u in range(level_n):
            cu = comm[u]
            new_loops[cu] += loops[u]
            for v, w in weights[u].items():
                cv = comm[v]
                if cu == cv:
                    if u < v:
                        new_loops[cu] += w
                else:
                    new_weights[cu][cv] = new_weights[cu].get(cv, 0.0) + w
        weights = new_weights
        loops = new_loops

    return Partition(community=tuple(membership), modularity=modularity(g, membership))


def fit_community(g, seed=0, partition=None):
    """Fit the planted-partition model from a (detected) community split.

    p_in is the pooled density inside communities, p_out the pooled
    density across them; an impossible denominator (e.g. all singleton
    communities) yields probability 0 with an explanatory note.
    """
    if g.edge_count < 1:
        raise UnfittableError("community fit needs at least one edge")
    if partition is None:
        partition = louvain(g, seed=seed)
    community = partition.community
    sizes = partition.sizes()
    intra = 0
    for u, v in g.edges():
        if community[u] == community[v]:
            intra += 1
    possible_in = sum(s * (s - 1) // 2 for s in sizes)
    n = g.node_count
    possible_out = n * (n - 1) // 2 - possible_in
    notes = []
    if possible_in > 0:
        p_in = intra / possible_in
    else:
        p_in = 0.0
        notes.append("p_in denominator is zero (all communities are singletons)")
    if possible_out > 0:
        p_out = (g.edge_count - intra) / possible_out
    else:
        p_out = 0.0
        notes.append("p_out denominator is zero (a single community spans the graph)")
    return FitReport(
        model="Com",
        params=CommunityParams(sizes=sizes, p_in=p_in, p_out=p_out),
        objective_value=0.0,
        evaluations=0,
        replicates_per_eval=0,
        seed=seed,
        notes=tuple(notes),
    )


def fit_2k(g):
    """Fit the 2K model: the joint degree matrix itself is the parameter."""
    return FitReport(
        model="2K",
        params=TwoKParams(jdm=joint_degree_matrix(g)),
        objective_value=0.0,
        evaluations=0,
        replicates_per_eval=0,
    )


FIT_FUNCTIONS = ("WS", "WS_STD", "CBA", "DD", "Com", "2K")


def fit_model(g, model, budget=DEFAULT_BUDGET, replicates=DEFAULT_REPLICATES, seed=0):
    """Fit one model by name; see :data:`FIT_FUNCTIONS` for valid names."""
    if model == "WS":
        return fit_ws(g, "clustering", budget=budget, replicates=replicates, seed=seed)
    if model == "WS_STD":
        return fit_ws(g, "degree_std", budget=budget, replicates=replicates, seed=seed)
    if model == "CBA":
        return fit_cba(g, budget=budget, replicates=replicates, seed=seed)
    if model == "DD":
        return fit_dd(g, budget=budget, replicates=replicates, seed=seed)
    if model == "Com":
        return fit_community(g, seed=seed)
    if model == "2K":
        return fit_2k(g)
    raise ValueError(f"unknown model {model!r}")
