"""Bivariate tensor (p,q)-Bernstein operator on [0,1]^2.

The bivariate operator is the tensor product of two univariate ones, with
an independent parameter pair and degree per axis.  This module also
houses the parameter schedules n -> (p_n, q_n) that turn the operators
into an approximation process, and the Korovkin-style sup-error
experiment over the six test monomials e_ij, 0 <= i+j <= 2.

Note on the shipped schedules: the convergence hypotheses ask for
p_n, q_n -> 1 with p_n^n -> a.  Since q_n < p_n forces q_n^n <= p_n^n,
any admissible schedule has b = lim q_n^n <= a; schedules claiming
b > a cannot exist.  The built-ins below are chosen admissible for all
generated degrees (n >= 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, Union

import numpy as np

from .pq_core import PQPair, bracket_values
from .univariate import basis_row, basis_row_exact, nodes, uni_apply

Number = Union[int, float, Fraction]

__all__ = [
    "BiParams",
    "ParamSchedule",
    "SCHEDULES",
    "bi_basis",
    "bi_apply",
    "bi_apply_exact",
    "bi_apply_grid",
    "bi_moment_closed",
    "bi_central_moment2",
    "KorovkinRow",
    "korovkin_experiment",
    "TEST_MONOMIALS",
]


@dataclass(frozen=True)
class BiParams:
    """Degrees and parameter pairs for the two tensor directions."""

    pq1: PQPair
    pq2: PQPair
    n: int
    m: int

    def __post_init__(self) -> None:
        if self.n < 1 or self.m < 1:
            raise ValueError(f"degrees must be >= 1, got n={self.n}, m={self.m}")


@dataclass(frozen=True)
class ParamSchedule:
    """A rule n -> (p_n, q_n) with its declared limits a = lim p_n^n,
    b = lim q_n^n (b is diagnostic only; no limit formula uses it)."""

    name: str
    rule: Callable[[int], tuple[float, float]]
    declared_a: float
    declared_b: float
    n_min: int = 2

    def pair(self, n: int) -> PQPair:
        if n < self.n_min:
            raise ValueError(
                f"schedule {self.name!r} admissible only for n >= {self.n_min}"
            )
        p, q = self.rule(n)
        return PQPair(p, q)

    def empirical_limits(self, n: int) -> tuple[float, float]:
        """(p_n^n, q_n^n) at a given degree, for limit diagnostics."""
        pq = self.pair(n)
        return pq.p**n, pq.q**n


SCHEDULES: dict[str, ParamSchedule] = {
    "i": ParamSchedule(
        name="i",
        rule=lambda n: (n / (n + 1), 1 - 1 / n),
        declared_a=math.exp(-1),
        declared_b=math.exp(-1),
    ),
    "ii": ParamSchedule(
        name="ii",
        rule=lambda n: (math.exp(-1 / n), math.exp(-2 / n)),
        declared_a=math.exp(-1),
        declared_b=math.exp(-2),
    ),
    "iii": ParamSchedule(
        name="iii",
        rule=lambda n: (1.0, 1 - 1 / n),
        declared_a=1.0,
        declared_b=math.exp(-1),
    ),
}


def bi_basis(params: BiParams, k: int, j: int, x: Number, y: Number) -> Number:
    """Tensor weight R_{n,k}(x) * R_{m,j}(y); nonnegative on the square."""
    if not (0 <= k <= params.n and 0 <= j <= params.m):
        raise ValueError(f"indices out of range: k={k}, j={j}")
    exact = (
        params.pq1.is_exact
        and params.pq2.is_exact
        and isinstance(x, (Fraction, int))
        and isinstance(y, (Fraction, int))
    )
    if exact:
        wx = basis_row_exact(params.n, Fraction(x), params.pq1)[k]
        wy = basis_row_exact(params.m, Fraction(y), params.pq2)[j]
        return wx * wy
    wx = basis_row(params.n, float(x), params.pq1)[k]
    wy = basis_row(params.m, float(y), params.pq2)[j]
    return float(wx * wy)


def bi_apply(f: Callable, params: BiParams, x: float, y: float) -> float:
    """Double sum of basis times f at the tensor nodes (float path).

    Iterated compensated sums: inner index j, outer k, so the result is
    deterministic and schedule-independent.
    """
    wx = basis_row(params.n, float(x), params.pq1)
    wy = basis_row(params.m, float(y), params.pq2)
    sx = nodes(params.n, params.pq1)
    ty = nodes(params.m, params.pq2)
    F = _eval_grid(f, sx, ty)
    return math.fsum(wx[k] * math.fsum(wy * F[k, :]) for k in range(params.n + 1))


def bi_apply_exact(f: Callable, params: BiParams, x: Fraction, y: Fraction) -> Fraction:
    """Exact-rational double sum; f must map Fraction pairs to Fractions."""
    pq1, pq2 = params.pq1.exact(), params.pq2.exact()
    wx = basis_row_exact(params.n, Fraction(x), pq1)
    wy = basis_row_exact(params.m, Fraction(y), pq2)
    brn = bracket_values(params.n, pq1)
    brm = bracket_values(params.m, pq2)
    sx = [brn[k] * pq1.p ** (params.n - k) / brn[params.n] for k in range(params.n + 1)]
    ty = [brm[j] * pq2.p ** (params.m - j) / brm[params.m] for j in range(params.m + 1)]
    total = Fraction(0)
    for k in range(params.n + 1):
        inner = Fraction(0)
        for j in range(params.m + 1):
            inner += wy[j] * f(sx[k], ty[j])
        total += wx[k] * inner
    return total


def _eval_grid(f: Callable, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """f on the outer product grid, tolerating scalar-only callables."""
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    try:
        F = np.asarray(f(X, Y), dtype=float)
        if F.shape != X.shape:
            raise ValueError
    except (TypeError, ValueError):
        F = np.array([[float(f(a, b)) for b in ys] for a in xs])
    return F


def bi_apply_grid(
    f: Callable, params: BiParams, xs: Sequence[float], ys: Sequence[float]
) -> np.ndarray:
    """Operator values on a grid, as W1^T F W2 (fast sweep path).

    Returns an array of shape (len(xs), len(ys)).
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    W1 = np.column_stack([basis_row(params.n, float(x), params.pq1) for x in xs])
    W2 = np.column_stack([basis_row(params.m, float(y), params.pq2) for y in ys])
    F = _eval_grid(f, nodes(params.n, params.pq1), nodes(params.m, params.pq2))
    return W1.T @ F @ W2


_SELECTORS = ("1", "s", "t", "st", "s2", "t2")


def bi_moment_closed(which: str, params: BiParams, x: Number, y: Number) -> Number:
    """Closed form of the six bivariate moments: 1, s, t, st, s^2, t^2.

    The t^2 identity uses the second direction's bracket [m]_{p2,q2}; the
    double-sum oracle confirms this with asymmetric degrees (see the
    tests).
    """
    if which not in _SELECTORS:
        raise ValueError(f"unknown moment selector {which!r}; use one of {_SELECTORS}")
    exact = (
        params.pq1.is_exact
        and params.pq2.is_exact
        and isinstance(x, (Fraction, int))
        and isinstance(y, (Fraction, int))
    )
    one: Number = Fraction(1) if exact else 1.0
    if not exact:
        x, y = float(x), float(y)
    if which == "1":
        return one
    if which == "s":
        return one * x
    if which == "t":
        return one * y
    if which == "st":
        return one * x * y
    if which == "s2":
        pq, n, v = params.pq1, params.n, x
    else:
        pq, n, v = params.pq2, params.m, y
    pq = pq if exact else pq.floats()
    br = bracket_values(n, pq)
    bm1 = br[n - 1] if n >= 1 else one * 0
    return pq.p ** (n - 1) / br[n] * v + pq.q * bm1 / br[n] * v * v


def bi_central_moment2(axis: str, params: BiParams, x: Number, y: Number) -> Number:
    """Second central moment along one axis:
    x-axis -> p1^{n-1}/[n] (x - x^2);  y-axis -> p2^{m-1}/[m] (y - y^2)."""
    if axis not in ("x", "y"):
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    if axis == "x":
        pq, n, v = params.pq1, params.n, x
    else:
        pq, n, v = params.pq2, params.m, y
    exact = pq.is_exact and isinstance(v, (Fraction, int))
    if not exact:
        pq, v = pq.floats(), float(v)
    N = bracket_values(n, pq)[n]
    return pq.p ** (n - 1) / N * (v - v * v)


# The Korovkin test set: e_ij(x,y) = x^i y^j for 0 <= i+j <= 2.
TEST_MONOMIALS: dict[str, Callable] = {
    "e00": lambda x, y: np.ones_like(np.asarray(x, dtype=float) * np.asarray(y, dtype=float)),
    "e10": lambda x, y: x * np.ones_like(np.asarray(y, dtype=float)),
    "e01": lambda x, y: np.ones_like(np.asarray(x, dtype=float)) * y,
    "e11": lambda x, y: x * y,
    "e20": lambda x, y: x * x * np.ones_like(np.asarray(y, dtype=float)),
    "e02": lambda x, y: np.ones_like(np.asarray(x, dtype=float)) * y * y,
}


@dataclass
class KorovkinRow:
    """Sup-errors at one degree pair, with the six test-function errors."""

    n: int
    m: int
    sup_error: float
    test_errors: dict[str, float] = field(default_factory=dict)
    warn: str = ""


def sup_error_grid(
    f: Callable, params: BiParams, grid: int = 50
) -> float:
    """sup over the uniform (grid+1)^2 lattice (boundary included) of
    |B f - f|."""
    xs = np.linspace(0.0, 1.0, grid + 1)
    B = bi_apply_grid(f, params, xs, xs)
    F = _eval_grid(f, xs, xs)
    return float(np.max(np.abs(B - F)))


def korovkin_experiment(
    f: Callable,
    sched1: ParamSchedule,
    sched2: ParamSchedule,
    degrees: Sequence[tuple[int, int]],
    grid: int = 50,
) -> list[KorovkinRow]:
    """Sup-error table for f alongside the six Korovkin monomials.

    A row is flagged when the schedule's empirical limits have visibly
    stalled (degenerate schedule diagnostics), never raised.
    """
    if grid < 10:
        raise ValueError(f"grid resolution must be >= 11 points per axis, got {grid + 1}")
    rows = []
    for n, m in degrees:
        params = BiParams(sched1.pair(n), sched2.pair(m), n, m)
        errs = {name: sup_error_grid(g, params, grid) for name, g in TEST_MONOMIALS.items()}
        warn = ""
        pn, _ = sched1.empirical_limits(n)
        pm, _ = sched2.empirical_limits(m)
        if abs(pn - sched1.declared_a) > 0.5 or abs(pm - sched2.declared_a) > 0.5:
            warn = "schedule far from declared limit"
        rows.append(
            KorovkinRow(n=n, m=m, sup_error=sup_error_grid(f, params, grid), test_errors=errs, warn=warn)
        )
    return rows
