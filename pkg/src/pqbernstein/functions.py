"""Built-in target functions on [0,1]^2 and their metadata.

Each corpus entry carries whatever the error-bound machinery needs to
check hypotheses honestly: analytic partials where the function is
smooth, a Lipschitz-class declaration where one is claimed, and
smoothness flags.  Expression-defined functions (from the CLI parser)
get finite-difference partials only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

__all__ = [
    "LipschitzSpec",
    "TargetFunction2D",
    "CORPUS",
    "resolve_function",
    "monomial_1d",
    "monomial_2d",
]


@dataclass(frozen=True)
class LipschitzSpec:
    """Claimed membership in Lip_M(alpha1, alpha2):
    |f(s,t) - f(x,y)| <= M |s-x|^alpha1 |t-y|^alpha2 for all pairs."""

    M: float
    alpha1: float
    alpha2: float

    def __post_init__(self) -> None:
        if self.M <= 0 or not (0 < self.alpha1 <= 1) or not (0 < self.alpha2 <= 1):
            raise ValueError(f"invalid Lipschitz parameters: {self}")


@dataclass(frozen=True)
class TargetFunction2D:
    """An evaluable scalar function on [0,1]^2 with optional metadata."""

    name: str
    fn: Callable
    fx: Optional[Callable] = None
    fy: Optional[Callable] = None
    fxx: Optional[Callable] = None
    fyy: Optional[Callable] = None
    lipschitz: Optional[LipschitzSpec] = None
    c1: bool = False
    c2: bool = False
    description: str = ""

    def __call__(self, x, y):
        return self.fn(x, y)

    @property
    def has_analytic_partials(self) -> bool:
        return self.fx is not None and self.fy is not None

    @property
    def has_second_partials(self) -> bool:
        return self.fxx is not None and self.fyy is not None


def _ones_like(x, y):
    return np.ones(np.broadcast(np.asarray(x), np.asarray(y)).shape)


def _zeros(x, y):
    return np.zeros(np.broadcast(np.asarray(x), np.asarray(y)).shape)


_PI = np.pi

CORPUS: dict[str, TargetFunction2D] = {
    tf.name: tf
    for tf in [
        TargetFunction2D(
            name="const1",
            fn=lambda x, y: _ones_like(x, y),
            fx=_zeros,
            fy=_zeros,
            fxx=_zeros,
            fyy=_zeros,
            lipschitz=LipschitzSpec(1.0, 1.0, 1.0),
            c1=True,
            c2=True,
            description="constant 1",
        ),
        TargetFunction2D(
            name="linx",
            fn=lambda x, y: x * _ones_like(x, y),
            fx=lambda x, y: _ones_like(x, y),
            fy=_zeros,
            fxx=_zeros,
            fyy=_zeros,
            c1=True,
            c2=True,
            description="x",
        ),
        TargetFunction2D(
            name="liny",
            fn=lambda x, y: y * _ones_like(x, y),
            fx=_zeros,
            fy=lambda x, y: _ones_like(x, y),
            fxx=_zeros,
            fyy=_zeros,
            c1=True,
            c2=True,
            description="y",
        ),
        TargetFunction2D(
            name="prodxy",
            fn=lambda x, y: x * y,
            fx=lambda x, y: y * _ones_like(x, y),
            fy=lambda x, y: x * _ones_like(x, y),
            fxx=_zeros,
            fyy=_zeros,
            c1=True,
            c2=True,
            description="x*y",
        ),
        TargetFunction2D(
            name="quad",
            fn=lambda x, y: x * x + y * y,
            fx=lambda x, y: 2 * x * _ones_like(x, y),
            fy=lambda x, y: 2 * y * _ones_like(x, y),
            fxx=lambda x, y: 2 * _ones_like(x, y),
            fyy=lambda x, y: 2 * _ones_like(x, y),
            c1=True,
            c2=True,
            description="x^2 + y^2",
        ),
        TargetFunction2D(
            name="ripple",
            fn=lambda x, y: np.sin(_PI * x) * np.sin(_PI * y),
            fx=lambda x, y: _PI * np.cos(_PI * x) * np.sin(_PI * y),
            fy=lambda x, y: _PI * np.sin(_PI * x) * np.cos(_PI * y),
            fxx=lambda x, y: -_PI * _PI * np.sin(_PI * x) * np.sin(_PI * y),
            fyy=lambda x, y: -_PI * _PI * np.sin(_PI * x) * np.sin(_PI * y),
            c1=True,
            c2=True,
            description="sin(pi x) sin(pi y)",
        ),
        TargetFunction2D(
            name="vee",
            fn=lambda x, y: np.abs(x - 0.5) + np.abs(y - 0.5),
            description="|x-1/2| + |y-1/2| (continuous, not C^1)",
        ),
        TargetFunction2D(
            name="lip_half",
            fn=lambda x, y: np.sqrt(np.abs(x - 0.5)) * np.sqrt(np.abs(y - 0.5)),
            lipschitz=LipschitzSpec(1.0, 0.5, 0.5),
            description="|x-1/2|^(1/2) |y-1/2|^(1/2)",
        ),
    ]
}


def monomial_1d(i: int) -> Callable:
    """t -> t^i; works on floats, arrays and Fractions alike."""
    return lambda t: t**i if i else t**0


def monomial_2d(which: str) -> Callable:
    """The six bivariate moment test functions, by selector name."""
    table = {
        "1": lambda s, t: (s - s) + (t - t) + 1,
        "s": lambda s, t: s + (t - t),
        "t": lambda s, t: t + (s - s),
        "st": lambda s, t: s * t,
        "s2": lambda s, t: s * s + (t - t),
        "t2": lambda s, t: t * t + (s - s),
    }
    return table[which]


def from_expression(text: str, fd_step: float = 1e-5) -> TargetFunction2D:
    """Wrap a parsed expression as a target function.

    Partials come from central finite differences (clipped to stay inside
    the unit square), so expression functions are usable in the C^1 and
    Voronovskaja machinery with widened tolerances only.
    """
    from .expressions import parse_expr

    ast = parse_expr(text)

    def fn(x, y):
        return ast.eval(x, y)

    h = fd_step

    def _c(v):
        return np.clip(np.asarray(v, dtype=float), h, 1 - h)

    def fx(x, y):
        x = _c(x)
        return (fn(x + h, y) - fn(x - h, y)) / (2 * h)

    def fy(x, y):
        y = _c(y)
        return (fn(x, y + h) - fn(x, y - h)) / (2 * h)

    def fxx(x, y):
        x = _c(x)
        return (fn(x + h, y) - 2 * fn(x, y) + fn(x - h, y)) / (h * h)

    def fyy(x, y):
        y = _c(y)
        return (fn(x, y + h) - 2 * fn(x, y) + fn(x, y - h)) / (h * h)

    return TargetFunction2D(
        name=f"expr:{text}",
        fn=fn,
        fx=fx,
        fy=fy,
        fxx=fxx,
        fyy=fyy,
        description=f"expression {text!r} (finite-difference partials)",
    )


def resolve_function(text: str) -> TargetFunction2D:
    """A corpus function by name, or a parsed expression in x and y."""
    if text in CORPUS:
        return CORPUS[text]
    return from_expression(text)
