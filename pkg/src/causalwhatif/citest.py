"""Conditional independence test kernel.

Two finite-sample kernels: a stratified G-test (likelihood ratio) for discrete
columns and a partial-correlation z-test for numeric columns, plus a
dispatcher. The chi-square tail probability is computed in-house via the
regularized upper incomplete gamma function, so the package carries no
statistics dependency.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import BINARY, CATEGORICAL, DataTable
from .errors import NonDiscreteColumnError, SampleTooSmallError

# Strata with fewer observations than this are skipped as unreliable.
MIN_STRATUM_COUNT = 5

_GAMMA_TOL = 1e-14
_GAMMA_ITMAX = 500


def _gamma_p_series(a: float, x: float) -> float:
    # Lower regularized gamma P(a,x) by power series; converges fast for x < a+1.
    if x <= 0.0:
        return 0.0
    term = 1.0 / a
    total = term
    for n in range(1, _GAMMA_ITMAX):
        term *= x / (a + n)
        total += term
        if abs(term) < abs(total) * _GAMMA_TOL:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))

def _gamma_q_contfrac(a: float, x: float) -> float:
    # Upper regularized gamma Q(a,x) by Lentz continued fraction; for x >= a+1.
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _GAMMA_ITMAX):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _GAMMA_TOL:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))

def regularized_gamma_q(a: float, x: float) -> float:
    """Upper regularized incomplete gamma Q(a, x) for a > 0, x >= 0."""
    if a <= 0.0:
        raise ValueError("a must be positive")
    if x < 0.0:
        raise ValueError("x must be non-negative")
    if x == 0.0:
        return 1.0
    if x < a + 1.0:
        return min(max(1.0 - _gamma_p_series(a, x), 0.0), 1.0)
    return min(max(_gamma_q_contfrac(a, x), 0.0), 1.0)

def chi_square_sf(statistic: float, dof: int) -> float:
    """Upper-tail probability of a chi-square distribution."""
    if dof <= 0:
        return 1.0 if statistic <= 0.0 else 0.0
    return regularized_gamma_q(dof / 2.0, statistic / 2.0)

def normal_sf_two_sided(z: float) -> float:
    """Two-sided standard normal tail probability 2*(1 - Phi(|z|))."""
    return math.erfc(abs(z) / math.sqrt(2.0))


@dataclass(frozen=True)
class CiResult:
    """Outcome of one conditional independence test at level alpha."""

    statistic: float
    dof: int
    p_value: float
    independent: bool
    degenerate: bool = False


def _codes(table: DataTable, name: str) -> tuple[np.ndarray, int]:
    """Integer level codes for a discrete column and its level count."""
    col = table.column(name)
    if col.kind == BINARY:
        return col.values.astype(np.int64), 2
    if col.kind == CATEGORICAL:
        lookup = {lv: i for i, lv in enumerate(col.levels)}
        return np.array([lookup[v] for v in col.values], dtype=np.int64), len(col.levels)
    raise NonDiscreteColumnError(f"column {name!r} is continuous; g_test needs discrete data")


def g_test(table: DataTable, x: str, y: str, s, alpha: float) -> CiResult:
    """Stratified G-test of x independent of y given the discrete set s.

    The statistic 2*sum O*ln(O/E) is accumulated over the (x, y) contingency
    table within each stratum of s; dof counts (levels-1)*(levels-1) per
    stratum over levels with positive marginals. Strata with fewer than
    MIN_STRATUM_COUNT rows are skipped; if everything is skipped or no
    stratum carries information, the test is degenerate-independent.
    """
    s = tuple(s)
    _check_distinct(x, y, s)
    xc, nx = _codes(table, x)
    yc, ny = _codes(table, y)
    if s:
        stratum = np.zeros(table.n_rows, dtype=np.int64)
        radix = 1
        for name in s:
            sc, ns = _codes(table, name)
            stratum += sc * radix
            radix *= ns
    else:
        stratum = np.zeros(table.n_rows, dtype=np.int64)

    cell = (stratum * nx + xc) * ny + yc
    counts = np.bincount(cell, minlength=int(stratum.max() + 1) * nx * ny)
    tables = counts.reshape(-1, nx, ny)

    stat = 0.0
    dof = 0
    used_any = False
    for tab in tables:
        total = tab.sum()
        if total == 0:
            continue
        if total < MIN_STRATUM_COUNT:
            continue
        rows = tab.sum(axis=1)
        cols = tab.sum(axis=0)
        r = int((rows > 0).sum())
        c = int((cols > 0).sum())
        if r < 2 or c < 2:
            continue
        used_any = True
        dof += (r - 1) * (c - 1)
        expected = np.outer(rows, cols) / total
        mask = tab > 0
        stat += 2.0 * float(np.sum(tab[mask] * np.log(tab[mask] / expected[mask])))

    if not used_any or dof == 0:
        return CiResult(0.0, 0, 1.0, True, degenerate=True)
    p = chi_square_sf(stat, dof)
    return CiResult(float(stat), dof, p, p > alpha)


def fisher_z_test(table: DataTable, x: str, y: str, s, alpha: float) -> CiResult:
    """Partial-correlation z-test of x independent of y given numeric set s.

    Binary columns are treated as 0/1 numeric. A collinear conditioning set
    makes the test degenerate-independent rather than an error.
    """
    s = tuple(s)
    _check_distinct(x, y, s)
    for name in (x, y, *s):
        if table.column(name).kind == CATEGORICAL:
            raise NonDiscreteColumnError(
                f"column {name!r} is categorical; fisher_z_test needs numeric data"
            )
    n = table.n_rows
    dof = n - len(s) - 3
    if dof <= 0:
        raise SampleTooSmallError(f"need n > |s| + 3, got n={n}, |s|={len(s)}")

    data = table.matrix([x, y, *s])
    xv = data[:, 0]
    yv = data[:, 1]
    if s:
        design = np.column_stack([np.ones(n), data[:, 2:]])
        bx, _, rank, _ = np.linalg.lstsq(design, xv, rcond=None)
        if rank < design.shape[1]:
            # collinear conditioning set
            return CiResult(0.0, dof, 1.0, True, degenerate=True)
        by, _, _, _ = np.linalg.lstsq(design, yv, rcond=None)
        rx = xv - design @ bx
        ry = yv - design @ by
    else:
        rx = xv - xv.mean()
        ry = yv - yv.mean()
    sx = math.sqrt(float(rx @ rx))
    sy = math.sqrt(float(ry @ ry))
    if sx == 0.0 or sy == 0.0:
        # an endpoint with no residual variance carries no information
        return CiResult(0.0, dof, 1.0, True, degenerate=True)
    r = float(rx @ ry) / (sx * sy)
    r = max(min(r, 1.0), -1.0)
    if abs(r) >= 1.0 - 1e-12:
        return CiResult(math.inf, dof, 0.0, False)
    z = 0.5 * math.log((1.0 + r) / (1.0 - r)) * math.sqrt(dof)
    p = normal_sf_two_sided(z)
    return CiResult(z, dof, p, p > alpha)


def ci_test(table: DataTable, x: str, y: str, s, alpha: float) -> CiResult:
    """Dispatch: all-discrete columns go to g_test, otherwise fisher_z_test."""
    s = tuple(s)
    involved = [table.column(name) for name in (x, y, *s)]
    if all(c.is_discrete for c in involved):
        return g_test(table, x, y, s, alpha)
    if any(c.kind == CATEGORICAL for c in involved):
        raise NonDiscreteColumnError(
            "cannot mix categorical and continuous columns in one test; "
            "one-hot encode categorical columns first"
        )
    return fisher_z_test(table, x, y, s, alpha)


def _check_distinct(x: str, y: str, s: tuple[str, ...]) -> None:
    if x == y:
        raise ValueError("x and y must differ")
    if x in s or y in s:
        raise ValueError("x and y must not appear in the conditioning set")
