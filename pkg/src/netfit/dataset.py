"""The dataset table: one feature row per (graph name, subcategory).

Real networks carry subcategory "Real"; their generated counterparts
carry the model name and share the original's ``name`` column, which is
how goodness-of-fit pairs them up.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .metrics import CSV_HEADER, METRIC_FIELDS, FeatureVector

DOMAINS = ("social", "food", "brain", "chems")
CATEGORIES = ("real", "model")
SUBCATEGORIES = ("Real", "2K", "CBA", "WS", "WS_STD", "DD", "Com")


class DatasetError(ValueError):
    """Malformed dataset table or CSV."""


@dataclass(frozen=True)
class DatasetRow:
    name: str
    features: FeatureVector
    domain: str
    category: str
    subcategory: str


@dataclass(frozen=True)
class DatasetTable:
    rows: tuple

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        seen = set()
        for row in self.rows:
            if row.domain not in DOMAINS:
                raise DatasetError(f"unknown domain {row.domain!r} for {row.name!r}")
            if row.category not in CATEGORIES:
                raise DatasetError(f"unknown category {row.category!r} for {row.name!r}")
            if row.subcategory not in SUBCATEGORIES:
                raise DatasetError(f"unknown subcategory {row.subcategory!r} for {row.name!r}")
            if (row.category == "real") != (row.subcategory == "Real"):
                raise DatasetError(f"category/subcategory mismatch for {row.name!r}")
            key = (row.name, row.subcategory)
            if key in seen:
                raise DatasetError(f"duplicate row {key}")
            seen.add(key)
            for field_name in METRIC_FIELDS:
                if not math.isfinite(getattr(row.features, field_name)):
                    raise DatasetError(f"non-finite {field_name} for {row.name!r}")

    def __len__(self):
        return len(self.rows)

    def filter(self, domain=None, category=None, exclude_subcategories=()):
        kept = [
            r
            for r in self.rows
            if (domain is None or r.domain == domain)
            and (category is None or r.category == category)
            and r.subcategory not in exclude_subcategories
        ]
        return DatasetTable(rows=tuple(kept))

    def domains_present(self):
        return tuple(d for d in DOMAINS if any(r.domain == d for r in self.rows))

    def subcategories_present(self):
        return tuple(s for s in SUBCATEGORIES if any(r.subcategory == s for r in self.rows))

    def metric_matrix(self):
        """len(rows) x 7 array of the topological metrics, row order preserved."""
        return np.array([r.features.metric_values() for r in self.rows], dtype=float)

    def to_csv_text(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in self.rows:
            fv = r.features
            writer.writerow(
                [r.name, fv.size]
                + [repr(getattr(fv, f)) for f in METRIC_FIELDS]
                + [r.domain, r.category, r.subcategory]
            )
        return buf.getvalue()

    def to_csv(self, path):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_csv_text())

    @classmethod
    def from_csv_text(cls, text):
        reader = csv.reader(io.StringIO(text))
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetError("empty dataset CSV") from None
        if tuple(header) != CSV_HEADER:
            missing = [c for c in CSV_HEADER if c not in header]
            raise DatasetError(f"dataset CSV header mismatch; missing columns: {missing}")
        rows = []
        for record in reader:
            if not record:
                continue
            if len(record) != len(CSV_HEADER):
                raise DatasetError(f"row has {len(record)} fields, expected {len(CSV_HEADER)}")
            name = record[0]
            fv = FeatureVector(
                size=int(record[1]),
                **{f: float(record[2 + i]) for i, f in enumerate(METRIC_FIELDS)},
            )
            rows.append(
                DatasetRow(
                    name=name,
                    features=fv,
                    domain=record[9],
                    category=record[10],
                    subcategory=record[11],
                )
            )
        return cls(rows=tuple(rows))

    @classmethod
    def from_csv(cls, path):
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_csv_text(fh.read())


def write_feature_csv(named_features, path=None):
    """Feature-only CSV (no domain/category/subcategory columns).

    ``named_features`` is a sequence of (name, FeatureVector); returns the
    CSV text, and writes it to ``path`` when given.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER[:9])
    for name, fv in named_features:
        writer.writerow([name, fv.size] + [repr(getattr(fv, f)) for f in METRIC_FIELDS])
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text
