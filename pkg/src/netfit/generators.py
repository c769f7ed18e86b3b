"""The five random-graph models, with explicit seeded randomness.

Watts-Strogatz (WS), clustering Barabasi-Albert (CBA), duplication-
divergence (DD), community structure / planted partition (Com) and the
2K construction that realizes a target joint degree matrix exactly.

Every generator returns a simple :class:`~netfit.graph.Graph` and is
deterministic for a given (params, seed) pair. Randomness comes from
``numpy.random.default_rng(seed)`` only.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .graph import Graph, GraphBuilder
from .jdm import JointDegreeMatrix, canonical_key


class ParameterError(ValueError):
    """Model parameters violate the model's preconditions."""


class ConstructionError(RuntimeError):
    """2K wiring could not proceed (bug or non-graphical input)."""


class GenerationError(RuntimeError):
    """A generator exhausted its retry budget."""


# ---------------------------------------------------------------------------
# Parameter types


@dataclass(frozen=True)
class WSParams:
    n: int
    K: int
    p: float

    def validate(self):
        if self.K % 2 != 0 or not (2 <= self.K < self.n):
            raise ParameterError(f"WS requires even K with 2 <= K < n, got n={self.n} K={self.K}")
        if not 0.0 <= self.p <= 1.0:
            raise ParameterError(f"WS rewiring probability out of [0,1]: {self.p}")


@dataclass(frozen=True)
class CBAParams:
    n: int
    m: int
    p: float

    def validate(self):
        if not 1 <= self.m < self.n:
            raise ParameterError(f"CBA requires 1 <= m < n, got n={self.n} m={self.m}")
        if not 0.0 <= self.p <= 1.0:
            raise ParameterError(f"CBA triad probability out of [0,1]: {self.p}")


@dataclass(frozen=True)
class DDParams:
    n: int
    p: float

    def validate(self):
        if self.n < 2:
            raise ParameterError(f"DD requires n >= 2, got {self.n}")
        if not 0.0 < self.p <= 1.0:
            raise ParameterError(f"DD activation probability must be in (0,1], got {self.p}")


@dataclass(frozen=True)
class CommunityParams:
    sizes: tuple
    p_in: float
    p_out: float

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))

    @property
    def n(self):
        return sum(self.sizes)

    def validate(self):
        if not self.sizes or any(s < 1 for s in self.sizes):
            raise ParameterError(f"community sizes must all be >= 1, got {self.sizes}")
        for name, value in (("p_in", self.p_in), ("p_out", self.p_out)):
            if not 0.0 <= value <= 1.0:
                raise ParameterError(f"{name} out of [0,1]: {value}")


@dataclass(frozen=True)
class TwoKParams:
    jdm: JointDegreeMatrix

    def validate(self):
        report = validate_jdm(self.jdm)
        if not report.valid:
            raise ParameterError("invalid joint degree matrix: " + "; ".join(report.violations))


MODEL_NAMES = ("WS", "WS_STD", "CBA", "DD", "Com", "2K")

_PARAM_TYPES = {
    "WS": WSParams,
    "WS_STD": WSParams,
    "CBA": CBAParams,
    "DD": DDParams,
    "Com": CommunityParams,
    "2K": TwoKParams,
}


def params_to_json_obj(params, model=None, seed=None):
    """JSON object {model, params, seed} for a ModelParams value."""
    if model is None:
        model = next(name for name, t in _PARAM_TYPES.items() if type(params) is t)
    obj = {"model": model}
    if isinstance(params, TwoKParams):
        obj["params"] = {"jdm": params.jdm.to_json_obj()}
    elif isinstance(params, CommunityParams):
        obj["params"] = {"sizes": list(params.sizes), "p_in": params.p_in, "p_out": params.p_out}
    else:
        obj["params"] = {k: getattr(params, k) for k in params.__dataclass_fields__}
    if seed is not None:
        obj["seed"] = int(seed)
    return obj


def params_from_json_obj(obj):
    """Inverse of :func:`params_to_json_obj`; returns (model, params, seed)."""
    model = obj["model"]
    if model not in _PARAM_TYPES:
        raise ParameterError(f"unknown model {model!r}")
    raw = obj["params"]
    if model == "2K":
        params = TwoKParams(jdm=JointDegreeMatrix.from_json_obj(raw["jdm"]))
    elif model == "Com":
        params = CommunityParams(tuple(raw["sizes"]), float(raw["p_in"]), float(raw["p_out"]))
    else:
        params = _PARAM_TYPES[model](**raw)
    return model, params, obj.get("seed")


def generate(params, seed):
    """Dispatch to the generator matching the params type."""
    if isinstance(params, WSParams):
        return generate_ws(params, seed)
    if isinstance(params, CBAParams):
        return generate_cba(params, seed)
    if isinstance(params, DDParams):
        return generate_dd(params, seed)
    if isinstance(params, CommunityParams):
        return generate_community(params, seed)
    if isinstance(params, TwoKParams):
        return generate_2k(params.jdm, seed)
    raise ParameterError(f"unknown params type {type(params).__name__}")


# ---------------------------------------------------------------------------
# Watts-Strogatz


def generate_ws(params, seed):
    """Small-world graph: circulant ring lattice with random rewiring.

    Start from the ring where every node links its K/2 nearest neighbors
    on each side. Lattice edges are visited in (lane, position) order and
    each is independently rewired with probability p by replacing its
    second endpoint with a uniform choice among nodes that create neither
    a self-loop nor a duplicate edge (edge left in place if none exists).
    Edge count is exactly n*K/2 for every p.
    """
    params.validate()
    n, K, p = params.n, params.K, params.p
    k = K // 2
    rng = np.random.default_rng(seed)
    builder = GraphBuilder(n)
    for j in range(1, k + 1):
        for i in range(n):
            builder.add_edge(i, (i + j) % n)
    for j in range(1, k + 1):
        for i in range(n):
            if rng.random() >= p:
                continue
            old = (i + j) % n
            blocked = len(builder.neighbors(i)) + 1  # neighbors plus i itself
            if n - blocked == 0:
                continue
            while True:
                cand = int(rng.integers(n))
                if cand != i and not builder.has_edge(i, cand):
                    break
            builder.remove_edge(i, old)
            builder.add_edge(i, cand)
    return builder.build()


# ---------------------------------------------------------------------------
# Clustering Barabasi-Albert


def _weighted_pick(rng, repeated, builder, v, n_existing):
    """Degree-proportional pick of an attachment target for newcomer v.

    Rejection-samples the degree-repeated node list; falls back to an
    explicit candidate scan if rejections pile up, and to a uniform pick
    while the graph still has no edges.
    """
    if repeated:
        for _ in range(64):
            cand = repeated[int(rng.integers(len(repeated)))]
            if cand != v and not builder.has_edge(v, cand):
                return cand
        weights = []
        for u in range(n_existing):
            if u != v and not builder.has_edge(v, u):
                weights.extend([u] * len(builder.neighbors(u)))
        if weights:
            return weights[int(rng.integers(len(weights)))]
    candidates = [u for u in range(n_existing) if u != v and not builder.has_edge(v, u)]
    if not candidates:
        raise GenerationError("no attachment target available")
    return candidates[int(rng.integers(len(candidates)))]


def generate_cba(params, seed):
    """Preferential attachment with triad formation (clustered BA).

    Starts from a complete graph on m nodes. Each newcomer adds exactly m
    edges: the first by preferential attachment; each later edge closes a
    triangle with probability p (uniform choice among eligible neighbors
    of this step's attachment targets), otherwise falls back to
    preferential attachment.
    """
    params.validate()
    n, m, p = params.n, params.m, params.p
    rng = np.random.default_rng(seed)
    builder = GraphBuilder(m)
    repeated = []  # node id repeated once per incident edge endpoint
    for u in range(m):
        for w in range(u + 1, m):
            builder.add_edge(u, w)
            repeated.extend((u, w))
    for v in range(m, n):
        builder.add_node()
        pa_targets = []
        for link in range(m):
            target = None
            if link > 0:
                triad_set = set()
                for u in pa_targets:
                    triad_set.update(builder.neighbors(u))
                triad_set.discard(v)
                triad_set.difference_update(builder.neighbors(v))
                if triad_set and rng.random() < p:
                    ordered = sorted(triad_set)
                    target = ordered[int(rng.integers(len(ordered)))]
            if target is None:
                target = _weighted_pick(rng, repeated, builder, v, v)
                pa_targets.append(target)
            builder.add_edge(v, target)
            repeated.extend((v, target))
    return builder.build()


# ---------------------------------------------------------------------------
# Duplication-divergence

DD_FAILURE_BUDGET_PER_NODE = 10_000


def generate_dd(params, seed):
    """Duplication-divergence growth from a single edge.

    Repeatedly duplicates a uniformly chosen node, keeping each copied
    link independently with probability p; a replica that keeps no link
    is discarded and the attempt counts as a failure. Errors out after
    10000*n failed attempts (p > 0 makes success almost sure long before).
    """
    params.validate()
    n, p = params.n, params.p
    rng = np.random.default_rng(seed)
    builder = GraphBuilder(2)
    builder.add_edge(0, 1)
    current = 2
    failures = 0
    budget = DD_FAILURE_BUDGET_PER_NODE * n
    while current < n:
        v = int(rng.integers(current))
        kept = [u for u in sorted(builder.neighbors(v)) if rng.random() < p]
        if not kept:
            failures += 1
            if failures > budget:
                raise GenerationError(
                    f"duplication-divergence exceeded {budget} failed attempts (p={p})"
                )
            continue
        replica = builder.add_node()
        for u in kept:
            builder.add_edge(replica, u)
        current += 1
    return builder.build()


# ---------------------------------------------------------------------------
# Community structure (planted partition)


def _sample_distinct(rng, total, count):
    """count distinct integers from range(total), uniform without replacement."""
    if count > total:
        raise ValueError("cannot sample more cells than exist")
    if count == 0:
        return np.zeros(0, dtype=np.int64)
    if count * 8 >= total:
        return rng.choice(total, size=count, replace=False)
    chosen = set()
    out = []
    while len(out) < count:
        cand = int(rng.integers(total))
        if cand not in chosen:
            chosen.add(cand)
            out.append(cand)
    return np.asarray(out, dtype=np.int64)


def generate_community(params, seed):
    """Planted-partition graph: ER blocks joined by sparser random edges.

    Within-group pairs are linked independently with p_in, cross-group
    pairs with p_out. Per block, the edge count is drawn binomially and
    that many distinct pairs are placed uniformly, which reproduces the
    independent-pair distribution exactly.
    """
    params.validate()
    sizes = params.sizes
    n = params.n
    rng = np.random.default_rng(seed)
    builder = GraphBuilder(n)
    offsets = []
    acc = 0
    for s in sizes:
        offsets.append(acc)
        acc += s
    for gi, s in enumerate(sizes):
        base = offsets[gi]
        pairs_total = s * (s - 1) // 2
        if pairs_total == 0 or params.p_in == 0.0:
            continue
        count = int(rng.binomial(pairs_total, params.p_in))
        for cell in _sample_distinct(rng, pairs_total, count):
            u, v = _triangular_unrank(int(cell), s)
            builder.add_edge(base + u, base + v)
    for gi in range(len(sizes)):
        for gj in range(gi + 1, len(sizes)):
            cells_total = sizes[gi] * sizes[gj]
            if params.p_out == 0.0:
                continue
            count = int(rng.binomial(cells_total, params.p_out))
            for cell in _sample_distinct(rng, cells_total, count):
                u, v = divmod(int(cell), sizes[gj])
                builder.add_edge(offsets[gi] + u, offsets[gj] + v)
    return builder.build()


def _triangular_unrank(cell, s):
    """cell index in [0, C(s,2)) -> pair (u, v) with u < v, row-major."""
    u = 0
    row = s - 1
    while cell >= row:
        cell -= row
        u += 1
        row -= 1
    return u, u + 1 + cell


# ---------------------------------------------------------------------------
# 2K construction


@dataclass(frozen=True)
class JdmValidation:
    valid: bool
    violations: tuple
    degree_counts: dict


def validate_jdm(jdm):
    """Check the graphicality conditions of a joint degree matrix.

    A JDM is realizable as a simple graph iff every implied class size
    n_k = (endpoint total of degree k) / k is a positive integer and no
    class pair demands more edges than distinct node pairs exist:
    entries[k,l] <= n_k*n_l for k != l and entries[k,k] <= n_k(n_k-1)/2.
    """
    violations = []
    totals = {}
    for (k, l), c in sorted(jdm.entries.items()):
        if c < 0:
            violations.append(f"negative count for ({k},{l})")
        if k < 1:
            violations.append(f"degree {k} < 1 in entry ({k},{l})")
        totals[k] = totals.get(k, 0) + c
        totals[l] = totals.get(l, 0) + c
    counts = {}
    for k, total in sorted(totals.items()):
        if k < 1:
            continue
        if total % k != 0:
            violations.append(f"degree-{k} endpoint total {total} not divisible by {k}")
        else:
            counts[k] = total // k
    if not violations:
        for (k, l), c in sorted(jdm.entries.items()):
            nk, nl = counts[k], counts[l]
            if k == l:
                cap = nk * (nk - 1) // 2
                if c > cap:
                    violations.append(f"entry ({k},{k})={c} exceeds n_k(n_k-1)/2={cap}")
            elif c > nk * nl:
                violations.append(f"entry ({k},{l})={c} exceeds n_k*n_l={nk * nl}")
    return JdmValidation(valid=not violations, violations=tuple(violations), degree_counts=counts)


class _StubPool:
    """Free-stub bookkeeping for one degree class: lowest-id-first access."""

    def __init__(self, members, free):
        self.members = members  # ascending node ids of this class
        self.free = free  # shared free-stub array
        self.heap = list(members)
        heapq.heapify(self.heap)

    def push(self, v):
        heapq.heappush(self.heap, v)

    def iter_free(self):
        """Yield nodes with free stubs in ascending id order."""
        seen = set()
        kept = []
        try:
            while self.heap:
                v = heapq.heappop(self.heap)
                if self.free[v] <= 0 or v in seen:
                    continue
                seen.add(v)
                kept.append(v)
                yield v
        finally:
            for v in kept:
                heapq.heappush(self.heap, v)

    def saturated(self):
        return [v for v in self.members if self.free[v] <= 0]


def generate_2k(jdm, seed=None):
    """Simple graph realizing the given joint degree matrix exactly.

    Wires free stubs class pair by class pair (decreasing k+l), always
    pairing the lowest-id nodes that still have free stubs. When a wanted
    endpoint is saturated, a Neighbour Switch hands one of its edges to a
    same-class node with a free stub, which changes neither the degree
    demands nor the class edge counts. The construction itself is
    deterministic; ``seed`` is accepted for generator-interface
    uniformity only.
    """
    report = validate_jdm(jdm)
    if not report.valid:
        raise ParameterError("invalid joint degree matrix: " + "; ".join(report.violations))
    counts = report.degree_counts
    degrees_sorted = sorted(counts)
    members = {k: [] for k in degrees_sorted}
    target = []
    for k in degrees_sorted:
        for _ in range(counts[k]):
            v = len(target)
            target.append(k)
            members[k].append(v)
    n = len(target)
    free = list(target)
    adj = [set() for _ in range(n)]
    pools = {k: _StubPool(members[k], free) for k in degrees_sorted}

    def neighbour_switch(v, klass, protected):
        """Free one stub on saturated v by re-homing one of its edges."""
        for donor in pools[klass].iter_free():
            if donor == v:
                continue
            if donor in protected and free[donor] < 2:
                continue
            for t in sorted(adj[v]):
                if t != donor and t not in adj[donor]:
                    adj[v].discard(t)
                    adj[t].discard(v)
                    adj[donor].add(t)
                    adj[t].add(donor)
                    free[v] += 1
                    free[donor] -= 1
                    pools[klass].push(v)
                    return
            # theory says a transferable neighbor always exists; keep
            # scanning donors defensively rather than trusting it
        raise ConstructionError(f"no switch partner for node {v} in degree class {klass}")

    def find_pair(k, l):
        for v in pools[k].iter_free():
            for w in pools[l].iter_free():
                if v != w and w not in adj[v]:
                    return v, w
        free_k = list(pools[k].iter_free())
        free_l = list(pools[l].iter_free())
        for v in free_k:
            for w in pools[l].saturated():
                if v != w and w not in adj[v]:
                    return v, w
        for w in free_l:
            for v in pools[k].saturated():
                if v != w and w not in adj[v]:
                    return v, w
        for v in pools[k].saturated():
            for w in pools[l].saturated():
                if v != w and w not in adj[v]:
                    return v, w
        raise ConstructionError(f"no unconnected node pair left for class ({k},{l})")

    order = sorted(jdm.entries, key=lambda kl: (-(kl[0] + kl[1]), -kl[1], -kl[0]))
    for k, l in order:
        for _ in range(jdm.entries[canonical_key(k, l)]):
            v, w = find_pair(k, l)
            if free[v] <= 0:
                neighbour_switch(v, k, (w,))
            if free[w] <= 0:
                neighbour_switch(w, l, (v,))
            adj[v].add(w)
            adj[w].add(v)
            free[v] -= 1
            free[w] -= 1
    if any(free):
        raise ConstructionError("free stubs remain after wiring all classes")
    return Graph(tuple(tuple(sorted(s)) for s in adj))
