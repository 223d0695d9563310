"""Exact arithmetic in Z[alpha] for the cubic family x^3 - a x^2 + x - 1.

Elements are integer triples ``(c0, c1, c2)`` standing for
``c0 + c1*alpha + c2*alpha**2``.  Every product is reduced with
``alpha**3 = a*alpha**2 - alpha + 1`` so triples are always canonical.

Numeric embeddings (into R via beta, into C via alpha) are only used for
pruning bounds, limits and drawing; identities are checked on triples.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

# Coefficients must fit a signed 256-bit word; anything larger is reported.
COEFF_LIMIT = 2**255 - 1


class CubicInt(NamedTuple):
    c0: int
    c1: int
    c2: int

    def __str__(self) -> str:
        return f"({self.c0},{self.c1},{self.c2})"


ZERO = CubicInt(0, 0, 0)
ONE = CubicInt(1, 0, 0)
ALPHA = CubicInt(0, 1, 0)
ALPHA2 = CubicInt(0, 0, 1)


@dataclass(frozen=True)
class RingParams:
    a: int
    beta: float
    alpha: complex
    abs_alpha: float


def _checked(c0: int, c1: int, c2: int) -> CubicInt:
    if abs(c0) > COEFF_LIMIT or abs(c1) > COEFF_LIMIT or abs(c2) > COEFF_LIMIT:
        raise OverflowError(f"coefficient overflow in Z[alpha]: ({c0}, {c1}, {c2})")
    return CubicInt(c0, c1, c2)


def _check_a(a: int) -> None:
    if not isinstance(a, int) or isinstance(a, bool) or a < 2:
        raise ValueError(f"a must be an integer >= 2, got {a!r}")


def char_poly(x, a: int):
    """Evaluate x^3 - a x^2 + x - 1 (Horner)."""
    return ((x - a) * x + 1) * x - 1


@lru_cache(maxsize=None)
def ring_new(a: int) -> RingParams:
    """Roots of x^3 - a x^2 + x - 1.

    beta is found by bisection on [1, a+1] (p(1) = 1-a < 0 < p(a+1)) run to
    float resolution; alpha comes from the deflated quadratic
    x^2 + (beta - a) x + 1/beta and is the root with positive imaginary part.
    """
    _check_a(a)
    lo, hi = 1.0, float(a + 1)
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if char_poly(mid, a) < 0:
            lo = mid
        else:
            hi = mid
    beta = lo if abs(char_poly(lo, a)) <= abs(char_poly(hi, a)) else hi

    b = beta - a
    q = 1.0 / beta
    disc = 4.0 * q - b * b
    if disc <= 0:
        raise ArithmeticError(f"expected a complex conjugate pair for a={a}")
    alpha = complex(-b / 2.0, math.sqrt(disc) / 2.0)
    return RingParams(a=a, beta=beta, alpha=alpha, abs_alpha=abs(alpha))


def add(x: CubicInt, y: CubicInt) -> CubicInt:
    return _checked(x[0] + y[0], x[1] + y[1], x[2] + y[2])


def sub(x: CubicInt, y: CubicInt) -> CubicInt:
    return _checked(x[0] - y[0], x[1] - y[1], x[2] - y[2])


def neg(x: CubicInt) -> CubicInt:
    return CubicInt(-x[0], -x[1], -x[2])


def scale(x: CubicInt, k: int) -> CubicInt:
    return _checked(k * x[0], k * x[1], k * x[2])


def cubic_mul(x: CubicInt, y: CubicInt, a: int) -> CubicInt:
    """Product in Z[alpha], reduced to canonical form."""
    x0, x1, x2 = x
    y0, y1, y2 = y
    p0 = x0 * y0
    p1 = x0 * y1 + x1 * y0
    p2 = x0 * y2 + x1 * y1 + x2 * y0
    p3 = x1 * y2 + x2 * y1
    p4 = x2 * y2
    # alpha^4 = (a^2 - 1) alpha^2 + (1 - a) alpha + a
    # alpha^3 = a alpha^2 - alpha + 1
    c0 = p0 + p3 + a * p4
    c1 = p1 - p3 + (1 - a) * p4
    c2 = p2 + a * p3 + (a * a - 1) * p4
    return _checked(c0, c1, c2)


def alpha_mul(x: CubicInt, a: int) -> CubicInt:
    """x * alpha."""
    c0, c1, c2 = x
    return _checked(c2, c0 - c2, c1 + a * c2)


def alpha_inv_mul(x: CubicInt, a: int) -> CubicInt:
    """x / alpha, using 1/alpha = alpha^2 - a alpha + 1."""
    c0, c1, c2 = x
    return _checked(c0 + c1, c2 - a * c0, c0)


def alpha_pow(n: int, a: int) -> CubicInt:
    """alpha**n for any integer n (negative powers via 1/alpha)."""
    x = ONE
    if n >= 0:
        for _ in range(n):
            x = alpha_mul(x, a)
    else:
        for _ in range(-n):
            x = alpha_inv_mul(x, a)
    return x


def embed(x: CubicInt, ring: RingParams, root: str = "alpha") -> complex | float:
    """Numeric value c0 + c1 r + c2 r^2 at r = alpha (complex) or beta (real)."""
    if root == "alpha":
        r = ring.alpha
    elif root == "beta":
        r = ring.beta
    else:
        raise ValueError(f"root must be 'alpha' or 'beta', got {root!r}")
    return x[0] + r * (x[1] + r * x[2])


def is_root(z: complex, a: int, tol: float = 1e-12) -> bool:
    return cmath.isclose(char_poly(z, a), 0, abs_tol=tol)
