"""Joint degree matrix: edge counts between degree classes.

The JDM of a graph records, for each degree pair (k, l), how many edges
join a degree-k node to a degree-l node. It pins down the degree
sequence, density and degree correlations of a graph exactly, which is
what makes it a universal fitting target.
"""

from __future__ import annotations

from dataclasses import dataclass, field


def canonical_key(k, l):
    return (k, l) if k <= l else (l, k)


@dataclass(frozen=True)
class JointDegreeMatrix:
    """Sparse JDM: ``entries[(k, l)] -> edge count`` with k <= l keys.

    ``degree_counts`` maps degree k to the number n_k of degree-k nodes;
    when omitted it is derived from the entries (each degree-k node
    contributes k edge endpoints, so n_k = endpoints_k / k).
    """

    entries: dict = field(default_factory=dict)
    degree_counts: dict = field(default_factory=dict)

    def __post_init__(self):
        norm = {}
        for (k, l), c in self.entries.items():
            key = canonical_key(int(k), int(l))
            norm[key] = norm.get(key, 0) + int(c)
        object.__setattr__(self, "entries", norm)
        if not self.degree_counts:
            object.__setattr__(self, "degree_counts", self._derive_counts())
        else:
            object.__setattr__(
                self, "degree_counts", {int(k): int(v) for k, v in self.degree_counts.items()}
            )

    def _endpoint_totals(self):
        totals = {}
        for (k, l), c in self.entries.items():
            totals[k] = totals.get(k, 0) + c
            totals[l] = totals.get(l, 0) + c
        return totals

    def _derive_counts(self):
        counts = {}
        for k, total in sorted(self._endpoint_totals().items()):
            if k <= 0:
                continue
            counts[k] = total / k  # may be non-integral; validate_jdm flags it
        return counts

    def edge_total(self):
        return sum(self.entries.values())

    def node_total(self):
        return sum(self.degree_counts.values())

    def degrees(self):
        return sorted(self.degree_counts)

    def get(self, k, l):
        return self.entries.get(canonical_key(k, l), 0)

    def to_json_obj(self):
        return {
            "entries": [[k, l, c] for (k, l), c in sorted(self.entries.items())],
        }

    @classmethod
    def from_json_obj(cls, obj):
        entries = {(int(k), int(l)): int(c) for k, l, c in obj["entries"]}
        return cls(entries=entries)
