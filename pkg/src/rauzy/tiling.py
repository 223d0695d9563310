"""Point clouds of the fractals, their translates and boundaries; rendering.

A cloud at depth N holds one point per admissible word with digits at
indices 2..N.  Every point of the limit set lies within

    radius = (a - 1) |alpha|^(N+1) / (1 - |alpha|)

of the cloud, which is the bound every check below is stated against.
"""
from __future__ import annotations

import logging
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.spatial import cKDTree
from scipy.stats import qmc

from . import algebra
from .algebra import CubicInt
from .automaton import lattice_coords, lattice_point, translate_graph
from .numeration import check_system, dfa

log = logging.getLogger(__name__)

DEFAULT_MAX_DEPTH = 28
DEFAULT_POINT_BUDGET = 20_000_000
DEFAULT_SEED = 20240611


class DepthError(ValueError):
    pass


def max_depth() -> int:
    """Configured depth ceiling; RAUZY_MAX_DEPTH overrides the default."""
    raw = os.environ.get("RAUZY_MAX_DEPTH")
    if raw is None:
        return DEFAULT_MAX_DEPTH
    try:
        val = int(raw)
    except ValueError:
        raise DepthError(f"RAUZY_MAX_DEPTH must be an integer, got {raw!r}") from None
    if val < 2:
        raise DepthError(f"RAUZY_MAX_DEPTH must be >= 2, got {val}")
    return val


def cloud_radius(a: int, depth: int) -> float:
    r = algebra.ring_new(a).abs_alpha
    return (a - 1) * r ** (depth + 1) / (1 - r)


@dataclass
class PointCloud:
    points: np.ndarray  # complex128, sorted by (re, im)
    depth: int
    radius: float
    a: int
    system: str
    translate: CubicInt = algebra.ZERO

    def __len__(self) -> int:
        return len(self.points)

    def shifted(self, v: CubicInt) -> "PointCloud":
        off = algebra.embed(v, algebra.ring_new(self.a))
        return PointCloud(_sorted(self.points + off), self.depth, self.radius, self.a,
                          self.system, algebra.add(self.translate, v))


def _sorted(z: np.ndarray) -> np.ndarray:
    order = np.lexsort((z.imag, z.real))
    return z[order]


def word_count(a: int, system: str, depth: int) -> int:
    """Number of admissible words over indices 2..depth (DFA path count)."""
    d = dfa(a, system)
    counts = {d.start: 1}
    for _ in range(depth - 1):
        nxt: dict[int, int] = {}
        for q, c in counts.items():
            for t in d.trans[q]:
                if t >= 0:
                    nxt[t] = nxt.get(t, 0) + c
        counts = nxt
    return sum(counts.values())


def default_depth(a: int, system: str = "R", target: int = 200_000) -> int:
    """Depth 22 for a = 2; for larger a the deepest level with about as many points."""
    depth = 2
    while depth < 22 and word_count(a, system, depth + 1) <= target:
        depth += 1
    return min(depth, max_depth())


def cloud(
    a: int,
    system: str = "R",
    depth: int | None = None,
    *,
    point_budget: int = DEFAULT_POINT_BUDGET,
) -> PointCloud:
    system = check_system(system)
    if depth is None:
        depth = default_depth(a, system)
    limit = max_depth()
    if depth < 2 or depth > limit:
        raise DepthError(f"depth must be in 2..{limit}, got {depth}")
    expected = word_count(a, system, depth)
    if expected > point_budget:
        raise DepthError(f"depth {depth} gives {expected} points, over the budget {point_budget}")

    ring = algebra.ring_new(a)
    d = dfa(a, system)
    trans = np.array(d.trans, dtype=np.int64)
    q = np.array([d.start], dtype=np.int64)
    z = np.zeros(1, dtype=np.complex128)
    for i in range(2, depth + 1):
        power = ring.alpha**i
        qs, zs = [], []
        for digit in range(a):
            nq = trans[q, digit]
            ok = nq >= 0
            qs.append(nq[ok])
            zs.append(z[ok] + digit * power)
        q = np.concatenate(qs)
        z = np.concatenate(zs)
    assert len(z) == expected
    return PointCloud(_sorted(z), depth, cloud_radius(a, depth), a, system)


# ---------------------------------------------------------------------------
# distance helpers
# ---------------------------------------------------------------------------

def _xy(z: np.ndarray) -> np.ndarray:
    return np.column_stack((z.real, z.imag))


def nearest_distance(points: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """Distance from each target to the nearest of ``points``."""
    if len(points) == 0:
        return np.full(len(targets), np.inf)
    tree = cKDTree(_xy(np.asarray(points)))
    dist, _ = tree.query(_xy(np.asarray(targets, dtype=np.complex128)))
    return dist


def hausdorff(p: np.ndarray, q: np.ndarray) -> float:
    if len(p) == 0 or len(q) == 0:
        return 0.0 if len(p) == len(q) else math.inf
    return float(max(nearest_distance(p, q).max(), nearest_distance(q, p).max()))


def overlap_fraction(c: PointCloud, v: CubicInt, eps: float) -> float:
    """Share of cloud points within eps of the cloud translated by v."""
    off = algebra.embed(v, algebra.ring_new(c.a))
    return float(np.mean(nearest_distance(c.points + off, c.points) <= eps))


# ---------------------------------------------------------------------------
# covering
# ---------------------------------------------------------------------------

@dataclass
class CoverReport:
    samples: int
    eps: float
    failures: list[complex]
    max_distance: float
    translates_used: int

    @property
    def ok(self) -> bool:
        return not self.failures


def _lattice_box(a: int, system: str, lo: complex, hi: complex) -> list[CubicInt]:
    """Lattice points whose embedding lands in the rectangle [lo, hi]."""
    ring = algebra.ring_new(a)
    b1 = algebra.embed(lattice_point(1, 0, system, a), ring)
    b2 = algebra.embed(lattice_point(0, 1, system, a), ring)
    m = np.array([[b1.real, b2.real], [b1.imag, b2.imag]])
    inv = np.linalg.inv(m)
    corners = [complex(x, y) for x in (lo.real, hi.real) for y in (lo.imag, hi.imag)]
    coords = np.array([inv @ [c.real, c.imag] for c in corners])
    xlo, ylo = np.floor(coords.min(axis=0)).astype(int) - 1
    xhi, yhi = np.ceil(coords.max(axis=0)).astype(int) + 1
    out = []
    for x in range(xlo, xhi + 1):
        for y in range(ylo, yhi + 1):
            v = lattice_point(x, y, system, a)
            e = algebra.embed(v, ring)
            if lo.real <= e.real <= hi.real and lo.imag <= e.imag <= hi.imag:
                out.append(v)
    return out


def cover_check(
    a: int,
    system: str = "G",
    window: tuple[complex, complex] = (complex(-2, -2), complex(2, 2)),
    samples: int = 10_000,
    eps: float | None = None,
    *,
    depth: int | None = None,
    seed: int = DEFAULT_SEED,
    base: PointCloud | None = None,
) -> CoverReport:
    """Every sample point of the window is within eps of some lattice translate
    of the cloud.  Samples come from a scrambled Halton sequence."""
    c = base if base is not None else cloud(a, system, depth)
    if eps is None:
        eps = 3 * c.radius
    if eps <= c.radius:
        raise ValueError(f"eps={eps} must exceed the cloud radius {c.radius}")
    lo, hi = window
    if hi.real < lo.real or hi.imag < lo.imag:
        raise ValueError("window corners must be ordered (low, high)")
    sampler = qmc.Halton(d=2, scramble=True, seed=seed)
    u = sampler.random(samples)
    pts = (lo.real + u[:, 0] * (hi.real - lo.real)) + 1j * (lo.imag + u[:, 1] * (hi.imag - lo.imag))

    ring = algebra.ring_new(a)
    cmin = complex(c.points.real.min(), c.points.imag.min())
    cmax = complex(c.points.real.max(), c.points.imag.max())
    # v is useful for sample z only if z - v falls in the cloud's bounding box
    translates = _lattice_box(a, system, lo - cmax - eps * (1 + 1j), hi - cmin + eps * (1 + 1j))
    tree = cKDTree(_xy(c.points))
    best = np.full(samples, np.inf)
    for v in translates:
        shifted = pts - algebra.embed(v, ring)
        inside = ((shifted.real >= cmin.real - eps) & (shifted.real <= cmax.real + eps)
                  & (shifted.imag >= cmin.imag - eps) & (shifted.imag <= cmax.imag + eps))
        idx = np.nonzero(inside)[0]
        if len(idx) == 0:
            continue
        dist, _ = tree.query(_xy(shifted[idx]))
        best[idx] = np.minimum(best[idx], dist)
    fails = [complex(z) for z in pts[best > eps]]
    finite = best[np.isfinite(best)]
    return CoverReport(
        samples=samples,
        eps=eps,
        failures=fails,
        max_distance=float(finite.max()) if len(finite) else math.inf,
        translates_used=len(translates),
    )


# ---------------------------------------------------------------------------
# boundary pieces
# ---------------------------------------------------------------------------

def boundary_cloud(
    a: int,
    u: CubicInt,
    depth: int | None = None,
    system: str = "R",
    *,
    point_budget: int = 2_000_000,
) -> PointCloud:
    """Approximation of tile ∩ (tile + u).

    Follows every live path of the translate automaton for ``depth - 1``
    steps.  Each path carries truncations ``l`` and ``r`` of two admissible
    words with ``l ≈ u + r``; the reported point is their midpoint, which is
    within ``radius`` of both the cloud and the cloud shifted by u.
    """
    system = check_system(system)
    if lattice_coords(u, system) is None:
        raise ValueError(f"{u} is not in the lattice of system {system}")
    if depth is None:
        depth = default_depth(a, system)
    limit = max_depth()
    if depth < 2 or depth > limit:
        raise DepthError(f"depth must be in 2..{limit}, got {depth}")
    ring = algebra.ring_new(a)
    g = translate_graph(a, u, system)
    live = g.live
    radius = cloud_radius(a, depth)
    if g.start not in live:
        return PointCloud(np.zeros(0, dtype=np.complex128), depth, radius, a, system, u)
    succ = {n: [(lab, t) for lab, t in outs if t in live] for n, outs in g.succ.items() if n in live}

    # layer: (node, left truncation); the right truncation is determined by these
    layer = {(g.start, algebra.ZERO)}
    for i in range(2, depth + 1):
        ai = algebra.alpha_pow(i, a)
        nxt = set()
        for node, left in layer:
            for (e, _f), t in succ[node]:
                nxt.add((t, algebra.add(left, algebra.scale(ai, e)) if e else left))
        if len(nxt) > point_budget:
            raise DepthError(f"boundary cloud exceeded {point_budget} paths at index {i}")
        layer = nxt
    ushift = algebra.embed(u, ring)
    scale_n = ring.alpha ** (depth - 2)
    pts = set()
    for node, left in layer:
        # left - u - right = A_N alpha^(N-2), A_N being the node's value
        zl = algebra.embed(left, ring)
        gap = algebra.embed(CubicInt(*node[0]), ring) * scale_n
        zr_shift = zl - gap  # = right + u
        pts.add(complex(round_c(0.5 * (zl + zr_shift))))
    arr = np.array(sorted(pts, key=lambda z: (z.real, z.imag)), dtype=np.complex128)
    log.debug("boundary cloud a=%d u=%s: %d points", a, u, len(arr))
    return PointCloud(arr, depth, radius, a, system, u)


def round_c(z: complex, digits: int = 14) -> complex:
    return complex(round(z.real, digits), round(z.imag, digits))


def cluster(points: np.ndarray, tol: float) -> list[complex]:
    """Greedy single-linkage representatives; points closer than tol merge."""
    reps: list[complex] = []
    if len(points) == 0:
        return reps
    tree = cKDTree(_xy(points))
    seen = np.zeros(len(points), dtype=bool)
    for i in range(len(points)):
        if seen[i]:
            continue
        stack = [i]
        seen[i] = True
        members = []
        while stack:
            j = stack.pop()
            members.append(j)
            for k in tree.query_ball_point(_xy(points[j : j + 1])[0], tol):
                if not seen[k]:
                    seen[k] = True
                    stack.append(k)
        reps.append(complex(points[members].mean()))
    return reps


# ---------------------------------------------------------------------------
# raster output
# ---------------------------------------------------------------------------

WHITE = (255, 255, 255)


@dataclass
class RasterImage:
    width: int
    height: int
    window: tuple[complex, complex]
    pixels: np.ndarray = field(repr=False)  # (height, width, 3) uint8

    def to_ppm(self) -> bytes:
        header = f"P6\n{self.width} {self.height}\n255\n".encode("ascii")
        return header + np.ascontiguousarray(self.pixels, dtype=np.uint8).tobytes()

    def save(self, path: str | Path) -> None:
        Path(path).write_bytes(self.to_ppm())

    def non_white(self) -> np.ndarray:
        return np.argwhere(np.any(self.pixels != 255, axis=2))


def read_ppm(data: bytes) -> RasterImage:
    parts = data.split(maxsplit=4)
    if parts[0] != b"P6" or int(parts[3]) != 255:
        raise ValueError("not a P6 image with maxval 255")
    w, h = int(parts[1]), int(parts[2])
    body = parts[4]
    pix = np.frombuffer(body, dtype=np.uint8).reshape(h, w, 3).copy()
    return RasterImage(w, h, (0j, 0j), pix)


def fit_window(clouds: Sequence[PointCloud], margin: float = 0.05) -> tuple[complex, complex]:
    """Square window around all points, with a relative margin."""
    pts = [c.points for c in clouds if len(c.points)]
    if not pts:
        return (complex(-1, -1), complex(1, 1))
    z = np.concatenate(pts)
    xlo, xhi = z.real.min(), z.real.max()
    ylo, yhi = z.imag.min(), z.imag.max()
    cx, cy = (xlo + xhi) / 2, (ylo + yhi) / 2
    half = max(xhi - xlo, yhi - ylo, 1e-9) / 2 * (1 + margin)
    return (complex(cx - half, cy - half), complex(cx + half, cy + half))


def render(
    clouds: Sequence[tuple[PointCloud, tuple[int, int, int]]],
    width: int = 800,
    height: int = 800,
    window: tuple[complex, complex] | None = None,
) -> RasterImage:
    if width <= 0 or height <= 0:
        raise ValueError(f"image dimensions must be positive, got {width}x{height}")
    if window is None:
        window = fit_window([c for c, _ in clouds])
    lo, hi = window
    w, h = hi.real - lo.real, hi.imag - lo.imag
    if w <= 0 or h <= 0:
        raise ValueError("render window must have positive width and height")
    pix = np.full((height, width, 3), 255, dtype=np.uint8)
    for c, color in clouds:
        z = c.points
        if len(z) == 0:
            continue
        x = np.floor((z.real - lo.real) / w * width).astype(np.int64)
        y = np.floor((hi.imag - z.imag) / h * height).astype(np.int64)
        # points on the far edges belong to the last row/column
        x[(x == width) & (z.real <= hi.real)] = width - 1
        y[(y == height) & (z.imag >= lo.imag)] = height - 1
        ok = (x >= 0) & (x < width) & (y >= 0) & (y < height)
        pix[y[ok], x[ok]] = color
    return RasterImage(width, height, window, pix)


PALETTE = [
    (31, 119, 180), (214, 39, 40), (44, 160, 44), (255, 127, 14),
    (148, 103, 189), (140, 86, 75), (227, 119, 194), (127, 127, 127),
    (188, 189, 34), (23, 190, 207),
]


def write_csv(c: PointCloud, path: str | Path | None = None) -> str:
    """``re,im`` rows with 15 significant digits, in sorted point order."""
    lines = ["re,im"] + [f"{z.real:.15g},{z.imag:.15g}" for z in c.points]
    text = "\n".join(lines) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
