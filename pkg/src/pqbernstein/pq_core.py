"""Two-parameter (p,q)-calculus primitives.

All operator and moment formulas in this package are built from the
(p,q)-integer

    [n]_{p,q} = p^{n-1} + p^{n-2} q + ... + q^{n-1}   (= (p^n - q^n)/(p - q)),

its factorial, the (p,q)-binomial coefficient, and the falling product
prod_{s=0}^{c-1} (p^s - q^s x).

Every exported operation runs in two modes, chosen by the number type of
the parameter pair:

* exact mode -- ``fractions.Fraction`` inputs, closed under +,-,*,/ with
  no rounding.  Used as the oracle in all identity tests.
* float mode -- doubles.  Binomial coefficients go through the log domain
  so they stay usable for degrees of several hundred.

The summation form of ``[n]`` is used everywhere instead of the quotient
(p^n - q^n)/(p - q): the quotient cancels catastrophically as q -> p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

Number = Union[int, float, Fraction]

__all__ = [
    "PQPair",
    "pq_integer",
    "bracket_values",
    "pq_factorial",
    "pq_binomial",
    "log_bracket_factorials",
    "falling_product",
    "pq_binomial_expansion_check",
]


@dataclass(frozen=True)
class PQPair:
    """A validated parameter pair with 0 < q < p <= 1.

    The strict inequality q < p is enforced at construction; p = q is
    rejected even though the summation form of ``[n]`` would still be
    defined there.
    """

    p: Number
    q: Number

    def __post_init__(self) -> None:
        if not (0 < self.q < self.p <= 1):
            raise ValueError(
                f"require 0 < q < p <= 1, got p={self.p!r}, q={self.q!r}"
            )

    @property
    def is_exact(self) -> bool:
        return isinstance(self.p, (Fraction, int)) and isinstance(
            self.q, (Fraction, int)
        )

    @property
    def ratio(self) -> Number:
        """q/p, the single parameter the float basis path reduces to."""
        if self.is_exact:
            return Fraction(self.q) / Fraction(self.p)
        return self.q / self.p

    def exact(self) -> "PQPair":
        """Exact-rational copy (requires exactly representable fields)."""
        return PQPair(Fraction(self.p), Fraction(self.q))

    def floats(self) -> "PQPair":
        return PQPair(float(self.p), float(self.q))


def _zero(pq: PQPair) -> Number:
    return Fraction(0) if pq.is_exact else 0.0


def _one(pq: PQPair) -> Number:
    return Fraction(1) if pq.is_exact else 1.0


def pq_integer(n: int, pq: PQPair) -> Number:
    """[n]_{p,q} via the summation form; [n] = 0 for n <= 0.

    The extension to nonpositive n (empty sum) keeps moment formulas
    containing [n-2], [n-3] total for small degrees.
    """
    if n <= 0:
        return _zero(pq)
    p, q = pq.p, pq.q
    if pq.is_exact:
        return sum((Fraction(p) ** (n - 1 - i)) * (Fraction(q) ** i) for i in range(n))
    return math.fsum(p ** (n - 1 - i) * q**i for i in range(n))


def bracket_values(n: int, pq: PQPair) -> list:
    """[0], [1], ..., [n] via the stable recurrence [i] = p*[i-1] + q^(i-1)."""
    p, q = pq.p, pq.q
    out = [_zero(pq)]
    qpow = _one(pq)
    for i in range(1, n + 1):
        out.append(p * out[-1] + qpow)
        qpow *= q
    return out


def pq_factorial(n: int, pq: PQPair) -> Number:
    """[n]! = [n][n-1]...[1], with [0]! = 1."""
    if n < 0:
        raise ValueError(f"factorial undefined for n={n}")
    acc = _one(pq)
    for v in bracket_values(n, pq)[1:]:
        acc *= v
    return acc


def log_bracket_factorials(n: int, pq: PQPair) -> list[float]:
    """Cumulative log-factorials: entry i is log([i]!). Float path only."""
    br = bracket_values(n, pq.floats())
    out = [0.0]
    for i in range(1, n + 1):
        out.append(out[-1] + math.log(br[i]))
    return out


def pq_binomial(n: int, k: int, pq: PQPair) -> Number:
    """(p,q)-binomial coefficient [n]! / ([k]! [n-k]!).

    Exact mode multiplies bracket ratios directly; float mode works in the
    log domain (all factors positive), which keeps the computation stable
    for n up to several hundred.
    """
    if not 0 <= k <= n:
        raise ValueError(f"require 0 <= k <= n, got n={n}, k={k}")
    if k == 0 or k == n:
        return _one(pq)
    if pq.is_exact:
        br = bracket_values(n, pq)
        num = Fraction(1)
        den = Fraction(1)
        kk = min(k, n - k)
        for i in range(1, kk + 1):
            num *= br[n - kk + i]
            den *= br[i]
        return num / den
    lf = log_bracket_factorials(n, pq)
    return math.exp(lf[n] - lf[k] - lf[n - k])


def falling_product(x: Number, count: int, pq: PQPair) -> Number:
    """prod_{s=0}^{count-1} (p^s - q^s x); the empty product is 1.

    For x in [0,1] every factor is nonnegative because q^s x <= q^s <= p^s.
    """
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    exact = pq.is_exact and isinstance(x, (Fraction, int))
    p, q = pq.p, pq.q
    acc = Fraction(1) if exact else 1.0
    ppow = Fraction(1) if exact else 1.0
    qpow = Fraction(1) if exact else 1.0
    for _ in range(count):
        acc *= ppow - qpow * x
        ppow *= p
        qpow *= q
    return acc


def pq_binomial_expansion_check(
    n: int,
    a: Number,
    b: Number,
    x: Number,
    y: Number,
    pq: PQPair,
    rel_tol: float = 1e-12,
    abs_tol: float = 1e-14,
) -> bool:
    """Check the (p,q)-binomial expansion of (ax + by)^n against its
    product form (ax + by)(p ax + q by)...(p^{n-1} ax + q^{n-1} by).

    Exact inputs are compared strictly; floats within tolerance.  Test
    utility, n is expected to stay small (<= 20).
    """
    if n > 20:
        raise ValueError("expansion check is a test utility; use n <= 20")
    exact = pq.is_exact and all(isinstance(v, (Fraction, int)) for v in (a, b, x, y))
    p, q = pq.p, pq.q

    lhs = Fraction(0) if exact else 0.0
    for k in range(n + 1):
        term = (
            p ** math.comb(n - k, 2)
            * q ** math.comb(k, 2)
            * pq_binomial(n, k, pq)
            * a ** (n - k)
            * b**k
            * x ** (n - k)
            * y**k
        )
        lhs += term

    rhs = Fraction(1) if exact else 1.0
    for s in range(n):
        rhs *= (p**s) * a * x + (q**s) * b * y

    if exact:
        return lhs == rhs
    return math.isclose(lhs, rhs, rel_tol=rel_tol, abs_tol=abs_tol)


def as_exact_sequence(values: Sequence[Number]) -> list[Fraction]:
    """Convert a sequence of exactly-representable numbers to Fractions."""
    return [Fraction(v) for v in values]
