"""Local structure search: find the direct causes of the outcome.

Strategy: keep every feature marginally dependent on the outcome, then
back-eliminate any candidate that some small conditioning set of the other
candidates renders independent; repeat until a full pass removes nothing.
Conditioning sets are tried in increasing size up to max_cond; when the
remaining candidate set is larger than max_cond it is additionally tried
whole, since a spurious feature tied to several causes through a shared
hidden variable is only separable given all of them at once.

When the feature set contains no variables affected by the outcome, the
surviving set is exactly the parents-and-children of the outcome, which under
that assumption equals its direct causes.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable

from .citest import CiResult, ci_test
from .dataset import DataTable
from .errors import EmptyFeatureSetError

CiFunction = Callable[[DataTable, str, str, tuple, float], CiResult]


@dataclass(frozen=True)
class TraceRecord:
    """One conditional independence decision made during the search."""

    feature: str
    conditioning: tuple[str, ...]
    p_value: float
    independent: bool


@dataclass(frozen=True)
class ParentSet:
    """Discovered direct causes plus the full audit trail of tests."""

    parents: tuple[str, ...]
    trace: tuple[TraceRecord, ...]


def find_parents(table: DataTable, alpha: float = 0.05, max_cond: int = 3,
                 ci: CiFunction | None = None) -> ParentSet:
    """Discover the direct causes of the table's outcome column.

    `ci` defaults to the data-driven dispatcher; tests may inject an exact
    independence oracle instead.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must be in (0, 1)")
    if max_cond < 0:
        raise ValueError("max_cond must be >= 0")
    features = list(table.feature_names)
    if not features:
        raise EmptyFeatureSetError("table has no feature columns")
    if ci is None:
        ci = ci_test
    y = table.outcome
    column_index = {name: i for i, name in enumerate(table.column_names)}
    trace: list[TraceRecord] = []

    # marginal screen: keep features associated with the outcome
    strength: dict[str, float] = {}
    candidates: list[str] = []
    for f in features:
        res = ci(table, f, y, (), alpha)
        trace.append(TraceRecord(f, (), res.p_value, res.independent))
        if not res.independent:
            candidates.append(f)
            strength[f] = abs(res.statistic)
    candidates.sort(key=lambda f: (-strength[f], column_index[f]))

    # backward elimination to a fixed point
    changed = True
    while changed:
        changed = False
        for f in list(candidates):
            others = [c for c in candidates if c != f]
            if _eliminated(table, f, y, others, alpha, max_cond, ci, trace):
                candidates.remove(f)
                changed = True

    parents = tuple(sorted(candidates, key=lambda f: column_index[f]))
    return ParentSet(parents, tuple(trace))


def _eliminated(table, f, y, others, alpha, max_cond, ci, trace) -> bool:
    top = min(max_cond, len(others))
    for size in range(1, top + 1):
        for s in combinations(others, size):
            res = ci(table, f, y, s, alpha)
            trace.append(TraceRecord(f, s, res.p_value, res.independent))
            if res.independent:
                return True
    if len(others) > max_cond:
        s = tuple(others)
        res = ci(table, f, y, s, alpha)
        trace.append(TraceRecord(f, s, res.p_value, res.independent))
        if res.independent:
            return True
    return False
