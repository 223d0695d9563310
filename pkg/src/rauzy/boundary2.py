"""The a = 2 boundary: contractions, their IFS, the curve parametrisation and
the Hausdorff dimension.

Throughout, ``B(v)`` is the piece R ∩ (R + v) of the boundary of R = R_2,
approximated by :func:`rauzy.tiling.boundary_cloud`.  B(alpha - 1) is the
attractor of z -> h_i(z), i = 0, 1, 2, and the whole boundary is the union of
such pieces, so a continuous bijection [0, 1] -> B(alpha - 1) yields the
boundary curve.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import algebra, tiling
from .algebra import CubicInt

A = 2
_RING = algebra.ring_new(A)


def _cubic(*terms: tuple[int, int]) -> CubicInt:
    """Sum of coeff * alpha**power over (coeff, power) pairs, exact."""
    acc = algebra.ZERO
    for coeff, power in terms:
        acc = algebra.add(acc, algebra.scale(algebra.alpha_pow(power, A), coeff))
    return acc


# the lattice translates used below, as exact elements
U = _cubic((1, 1), (-1, 0))                  # alpha - 1 (= alpha^-3 + alpha^-1)
ONE_PLUS_AM2 = _cubic((1, 0), (1, -2))      # 1 + alpha^-2 (= alpha u)
ALPHA_INV = _cubic((1, -1))                  # alpha^-1 (= (alpha - 1) u)
ALPHA_PLUS_AM2 = _cubic((1, 1), (1, -2))    # alpha + alpha^-2 (= (1 + alpha) u)
MINUS_ONE = _cubic((-1, 0))


@dataclass(frozen=True)
class AffineContraction:
    """z -> offset + alpha**power * z."""

    name: str
    offset: CubicInt
    power: int

    @property
    def ratio(self) -> float:
        return _RING.abs_alpha ** self.power

    def __call__(self, z):
        return apply_map(self, z)


G_MAP = AffineContraction("g", _cubic((1, 1), (-1, 0)), 1)
H = (
    AffineContraction("h0", _cubic((1, 1), (-1, 0)), 2),
    AffineContraction("h1", _cubic((-1, 0)), 3),
    AffineContraction("h2", _cubic((1, 2), (1, 3)), 4),
)
MAPS = {m.name: m for m in (G_MAP, *H)}


def apply_map(m: AffineContraction, z):
    """Exact on CubicInt input, numeric (complex / ndarray) otherwise."""
    if isinstance(z, CubicInt):
        return algebra.add(m.offset, algebra.cubic_mul(algebra.alpha_pow(m.power, A), z, A))
    return algebra.embed(m.offset, _RING) + _RING.alpha ** m.power * z


def compose(names: Sequence[str] | str, z):
    """Apply maps right to left: compose("h2 h0", z) = h2(h0(z))."""
    if isinstance(names, str):
        names = names.split()
    for name in reversed(list(names)):
        z = apply_map(MAPS[name], z)
    return z


def fixed_point(m: AffineContraction) -> complex:
    return algebra.embed(m.offset, _RING) / (1 - _RING.alpha ** m.power)


# ---------------------------------------------------------------------------
# IFS structure
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8)
def piece(v: CubicInt, depth: int = 22) -> tiling.PointCloud:
    return tiling.boundary_cloud(A, v, depth, "R")


# contact points of the three images, exact
H1_H2_CONTACT = _cubic((-1, 0), (-1, 2), (-1, 4))   # -1 - alpha^2 - alpha^4 = h2(-alpha - 1/alpha)
H0_H1_CONTACT = _cubic((-1, 0), (-1, 3))            # -1 - alpha^3 = h1(-1)


# linkage and spread allowed around a contact point, in cloud radii
CONTACT_FACTOR = 10.0


@dataclass
class IFSReport:
    depth: int
    radius: float
    eps: float
    dist_union: float          # B(u) vs h0 B ∪ h1 B ∪ h2 B
    dist_g: float              # B(u) vs g(B(1 + alpha^-2))
    min_dist_h0_h2: float
    near_h1_h2: list[complex]  # clusters of h1-image points within eps of the h2 image
    near_h0_h1: list[complex]
    spread_h1_h2: float        # farthest such point from -1 - alpha^2 - alpha^4
    spread_h0_h1: float        # farthest such point from -1 - alpha^3

    @property
    def ok(self) -> bool:
        return self.dist_union <= self.eps and self.dist_g <= self.eps

    def contacts_ok(self) -> bool:
        lim = CONTACT_FACTOR * self.radius
        return (len(self.near_h1_h2) == 1 and len(self.near_h0_h1) == 1
                and self.spread_h1_h2 <= lim and self.spread_h0_h1 <= lim
                and self.min_dist_h0_h2 > 10 * self.radius)


def _close_pairs(p: np.ndarray, q: np.ndarray, eps: float) -> np.ndarray:
    """Points of p within eps of some point of q."""
    d = tiling.nearest_distance(q, p)
    return p[d <= eps]


def _spread(points: np.ndarray, target: CubicInt) -> float:
    if len(points) == 0:
        return math.inf
    return float(np.abs(points - algebra.embed(target, _RING)).max())


def ifs_check(depth: int = 22, eps: float | None = None, cluster_tol: float | None = None) -> IFSReport:
    base = piece(U, depth)
    r = base.radius
    if eps is None:
        eps = 4 * r
    if cluster_tol is None:
        cluster_tol = CONTACT_FACTOR * r
    z = base.points
    images = [apply_map(h, z) for h in H]
    union = np.concatenate(images)
    dist_union = tiling.hausdorff(z, union)
    gz = apply_map(G_MAP, piece(ONE_PLUS_AM2, depth).points)
    dist_g = tiling.hausdorff(z, gz)
    h0, h1, h2 = images
    min02 = float(tiling.nearest_distance(h2, h0).min())
    close12 = _close_pairs(h1, h2, eps)
    close01 = _close_pairs(h1, h0, eps)
    return IFSReport(
        depth, r, eps, dist_union, dist_g, min02,
        tiling.cluster(close12, cluster_tol), tiling.cluster(close01, cluster_tol),
        _spread(close12, H1_H2_CONTACT), _spread(close01, H0_H1_CONTACT),
    )


# ---------------------------------------------------------------------------
# singleton intersections of boundary pieces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntersectionPoint:
    label: str
    first: CubicInt
    second: CubicInt
    value: CubicInt
    radius: float
    dist_first: float               # exact point to the first cloud
    dist_second: float              # exact point to the second cloud
    clusters: tuple[complex, ...]   # close pairs of the two clouds, clustered
    spread: float                   # farthest close point from the exact value

    @property
    def numeric(self) -> complex:
        return algebra.embed(self.value, _RING)

    def ok(self, spread_factor: float = 6.0) -> bool:
        return (self.dist_first <= self.radius and self.dist_second <= self.radius
                and len(self.clusters) == 1 and self.spread <= spread_factor * self.radius)


SINGLETONS = (
    ("a", U, ONE_PLUS_AM2, _cubic((-1, 0))),
    ("b", U, algebra.neg(ONE_PLUS_AM2), _cubic((-1, 1), (-1, -1))),
    ("c", ALPHA_INV, ONE_PLUS_AM2, _cubic((-1, 1))),
)


def intersection_points(depth: int = 22, tol_factor: float = 2.0) -> list[IntersectionPoint]:
    """The three single-point intersections of pairs of boundary pieces.

    The exact point must be within radius of both clouds, and the points of
    the first cloud lying within ``tol_factor * radius`` of the second must
    form one cluster around it.
    """
    out = []
    for label, v1, v2, exact in SINGLETONS:
        p, q = piece(v1, depth), piece(v2, depth)
        tol = tol_factor * p.radius
        close = _close_pairs(p.points, q.points, tol)
        target = algebra.embed(exact, _RING)
        d1 = float(tiling.nearest_distance(p.points, [target])[0])
        d2 = float(tiling.nearest_distance(q.points, [target])[0])
        out.append(IntersectionPoint(label, v1, v2, exact, p.radius, d1, d2,
                                     tuple(tiling.cluster(close, tol)), _spread(close, exact)))
    return out


# ---------------------------------------------------------------------------
# ternary words and the digit rewriting psi
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TernaryWord:
    """t = sum a_i 3^-i: a finite prefix followed by ``tail`` repeated."""

    digits: tuple[int, ...]
    tail: int = 0

    def __post_init__(self):
        if any(d not in (0, 1, 2) for d in self.digits) or self.tail not in (0, 1, 2):
            raise ValueError(f"ternary digits must be 0, 1 or 2: {self.digits}, tail {self.tail}")

    def prefix(self, n: int) -> tuple[int, ...]:
        d = self.digits[:n]
        return d + (self.tail,) * (n - len(d))

    def value(self) -> Fraction:
        t = sum(Fraction(d, 3 ** (i + 1)) for i, d in enumerate(self.digits))
        return t + Fraction(self.tail, 2 * 3 ** len(self.digits))

    def __str__(self) -> str:
        return "".join(map(str, self.digits)) + f"({self.tail})*"


def ternary(t, depth: int = 40, twin: bool = False) -> TernaryWord:
    """Ternary digits of t in [0, 1] by multiply-by-3 and floor.

    Triadic rationals come out terminating (0-tail) unless ``twin`` asks for
    the other representation ending in 2s.  t = 1 only has the all-2 form.
    """
    # floats are snapped to the nearest fraction with a modest denominator so
    # that e.g. 1/3 is recognised as triadic
    t = Fraction(t).limit_denominator(10**9) if isinstance(t, float) else Fraction(t)
    if t < 0 or t > 1:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    if t == 1:
        return TernaryWord((), 2)
    digits = []
    x = t
    for _ in range(depth):
        before = x
        x *= 3
        d = math.floor(x)
        x -= d
        if x == before and x != 0:
            # x = d/2: the digit d repeats forever
            return TernaryWord(tuple(digits), d)
        digits.append(d)
        if x == 0:
            break
    if x != 0 or not twin:
        return TernaryWord(tuple(digits), 0)
    # terminating: ... d 0 0 ... == ... (d-1) 2 2 ...
    while digits and digits[-1] == 0:
        digits.pop()
    if not digits:
        return TernaryWord((), 0)  # t = 0 has no twin
    digits[-1] -= 1
    return TernaryWord(tuple(digits), 2)


def psi(word: Sequence[int] | TernaryWord, n: int | None = None) -> tuple[int, ...]:
    """Rewrite ternary digits a_1 a_2 ... into the map indices b_1 b_2 ...

    b_k depends on a_1..a_k only, so a prefix of the input gives the same
    prefix of the output.
    """
    if isinstance(word, TernaryWord):
        a = word.prefix(len(word.digits) + 8 if n is None else n)
    elif isinstance(word, str):
        a = tuple(int(c) for c in word)
    else:
        a = tuple(word)
    if any(d not in (0, 1, 2) for d in a):
        raise ValueError(f"ternary digits must be 0, 1 or 2: {a}")
    if not a:
        return ()
    b = [a[0]]
    for k in range(1, len(a)):
        ak, prev = a[k], a[k - 1]
        if ak == 1:
            b.append(1)
        elif prev == 2:
            b.append(ak)
        elif prev == 0:
            b.append(2 - ak)
        else:
            r = k - 1
            while r > 0 and a[r - 1] == 1:
                r -= 1
            # 0-based r; the run of ones is a[r..k-1], its length is k - r
            run = k - r
            if r == 0 or a[r - 1] == 2:
                b.append(ak if run % 2 == 0 else 2 - ak)
            else:
                b.append(ak if run % 2 == 1 else 2 - ak)
    return tuple(b)


# ---------------------------------------------------------------------------
# the parametrisation
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def diam_piece(depth: int = 22) -> float:
    """Diameter of B(alpha - 1), from the cloud plus twice its radius."""
    c = piece(U, depth)
    z = c.points
    from scipy.spatial import ConvexHull

    xy = np.column_stack((z.real, z.imag))
    hull = xy[ConvexHull(xy).vertices]
    d = np.sqrt(((hull[:, None, :] - hull[None, :, :]) ** 2).sum(-1)).max()
    return float(d + 2 * c.radius)


def truncation_bound(n: int, x0: complex = -1) -> float:
    """Error bound of an n-fold composition started at x0."""
    center = -1  # the fixed point of h2, a point of the piece
    return _RING.abs_alpha ** (2 * n) * (diam_piece() + abs(x0 - center))


def param_f(t, n_terms: int = 40, x0: complex = -1, *, twin: bool = False) -> complex:
    """f(t) = lim h_{b_1} ∘ ... ∘ h_{b_n}(x0), (b_i) = psi of the ternary digits of t."""
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    w = t if isinstance(t, TernaryWord) else ternary(t, max(n_terms, 40), twin=twin)
    b = psi(w.prefix(n_terms))
    z = complex(x0)
    al = _RING.alpha
    offs = [algebra.embed(h.offset, _RING) for h in H]
    pows = [al ** h.power for h in H]
    for idx in reversed(b):
        z = offs[idx] + pows[idx] * z
    return z


def param_f_exact(digits: Sequence[int], x0: CubicInt = MINUS_ONE) -> CubicInt:
    """The same composition on a finite digit prefix, exactly in Z[alpha]."""
    z = x0
    for idx in reversed(psi(digits)):
        z = apply_map(H[idx], z)
    return z


def sample_curve(n_points: int, n_terms: int = 40) -> list[tuple[Fraction, complex]]:
    return [(Fraction(i, n_points - 1), param_f(Fraction(i, n_points - 1), n_terms))
            for i in range(n_points)]


def write_curve_csv(samples: Iterable[tuple[Fraction, complex]], path: str | Path | None = None) -> str:
    lines = ["t,re,im"] + [f"{float(t):.15g},{z.real:.15g},{z.imag:.15g}" for t, z in samples]
    text = "\n".join(lines) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


# ---------------------------------------------------------------------------
# gluing identities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Identity:
    lhs: str
    rhs: str
    exact: bool
    residual: float


def _identity(lhs: str, rhs: str, x: CubicInt = MINUS_ONE) -> Identity:
    le, re_ = compose(lhs, x), compose(rhs, x)
    xn = algebra.embed(x, _RING)
    res = abs(compose(lhs, xn) - compose(rhs, xn))
    return Identity(lhs, rhs, le == re_, res)


def gluing_identities() -> list[Identity]:
    """The four coincidences at -1 that make f independent of the ternary
    representation of t.  For x in {0, 2} the middle pair reads
    h_x h0(-1) = h1 h_{2-x}(-1); note h2(-1) = -1."""
    return [
        _identity("h2 h0", "h1 h0"),
        _identity("h0 h0", "h1 h2"),
        _identity("h2 h0", "h1 h0 h2"),
        _identity("h0 h0", "h1"),
    ]


# ---------------------------------------------------------------------------
# dimension
# ---------------------------------------------------------------------------

def moran_solve(ratios: Sequence[float], tol: float = 1e-12) -> float:
    """The s >= 0 with sum r_i^s = 1, by bisection."""
    if not ratios:
        raise ValueError("need at least one ratio")
    if any(not (0 < r < 1) for r in ratios):
        raise ValueError(f"ratios must lie in (0, 1): {list(ratios)}")

    def phi(s):
        return math.fsum(r**s for r in ratios) - 1

    if len(ratios) == 1:
        return 0.0
    lo, hi = 0.0, 1.0
    while phi(hi) > 0:
        lo, hi = hi, 2 * hi
    while hi - lo > 1e-15 * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if phi(mid) > 0:
            lo = mid
        else:
            hi = mid
        if mid in (lo, hi) and hi - lo <= 4e-16 * hi:
            break
    s = 0.5 * (lo + hi)
    if abs(phi(s)) > tol:
        raise ArithmeticError(f"bisection stalled with residual {phi(s):.3g}")
    return s


def dimension_boundary(a: int = 2) -> float:
    if a != 2:
        raise ValueError("the boundary dimension is only available for a = 2")
    r = _RING.abs_alpha
    return moran_solve([r**2, r**3, r**4], 1e-12)


def rho_root() -> float:
    """The root in (0, 1) of X^4 + X^3 + X^2 - 1, by bisection."""
    lo, hi = 0.0, 1.0  # p(0) = -1 < 0 < 2 = p(1)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if ((mid + 1) * mid + 1) * mid * mid - 1 < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def dimension_from_rho() -> float:
    """Second route to the dimension: log rho / log |alpha|."""
    return math.log(rho_root()) / math.log(_RING.abs_alpha)
