"""Command-line front end.

Exit codes: 0 success, 1 a computed value contradicts its expected value,
2 usage error.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from . import algebra, automaton, boundary2, numeration, tiling

log = logging.getLogger("rauzy")

SCHEMA_VERSION = 1
OVERLAP_PROXY_LIMIT = 0.02


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    a: int
    system: str
    depth: int
    window: tuple[float, float, float, float] | None
    resolution: tuple[int, int]
    seed: int
    output_path: str

    def validate(self) -> "RunConfig":
        if self.a < 2:
            raise UsageError(f"--a must be >= 2, got {self.a}")
        if self.system not in numeration.SYSTEMS:
            raise UsageError(f"--system must be R or G, got {self.system}")
        try:
            limit = tiling.max_depth()
        except tiling.DepthError as exc:
            raise UsageError(str(exc)) from None
        if not 2 <= self.depth <= limit:
            raise UsageError(f"--depth must be in 2..{limit}, got {self.depth}")
        w, h = self.resolution
        if w <= 0 or h <= 0:
            raise UsageError(f"--resolution must be positive, got {w}x{h}")
        if self.window is not None:
            x0, x1, y0, y1 = self.window
            if not all(math.isfinite(v) for v in self.window) or x1 <= x0 or y1 <= y0:
                raise UsageError(f"--window needs xmin < xmax and ymin < ymax, got {self.window}")
        return self

    def complex_window(self):
        if self.window is None:
            return None
        x0, x1, y0, y1 = self.window
        return (complex(x0, y0), complex(x1, y1))


def _triple(v):
    return [int(v[0]), int(v[1]), int(v[2])]


def _cx(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_expand(args) -> int:
    if args.a < 2:
        raise UsageError(f"--a must be >= 2, got {args.a}")
    if args.n < 0:
        raise UsageError(f"--n must be >= 0, got {args.n}")
    print(numeration.greedy_expand(args.a, args.n, args.system))
    return 0


def cmd_automaton(args) -> int:
    if args.a < 2:
        raise UsageError(f"--a must be >= 2, got {args.a}")
    aut = automaton.build_boundary_automaton(args.a, args.system)
    text = automaton.export_dot(aut) if args.format == "dot" else automaton.export_json(aut)
    out = args.out or f"automaton_a{args.a}_{args.system}.{args.format}"
    if out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)
    diff = automaton.states_match_explicit(args.a, aut)
    print(diff.summary())
    return 0 if diff.empty else 1


def _render_clouds(cfg: RunConfig, what: str):
    base = tiling.cloud(cfg.a, cfg.system, cfg.depth)
    if what == "fractal":
        return [(base, tiling.PALETTE[0])]
    neighbors = sorted(automaton.neighbor_set(cfg.a, cfg.system))
    if what == "tile":
        layers = [(base.shifted(v), tiling.PALETTE[1 + i % 9]) for i, v in enumerate(neighbors)]
        return layers + [(base, (0, 0, 0))]
    layers = [(base, (200, 200, 200))]
    for i, v in enumerate(neighbors):
        layers.append((tiling.boundary_cloud(cfg.a, v, cfg.depth, cfg.system), tiling.PALETTE[i % 10]))
    return layers


def cmd_render(args) -> int:
    cfg = RunConfig(
        a=args.a, system=args.system,
        depth=args.depth if args.depth is not None else tiling.default_depth(args.a, args.system),
        window=tuple(args.window) if args.window else None,
        resolution=tuple(args.resolution), seed=args.seed,
        output_path=args.out or f"{args.what}_a{args.a}_{args.system}.ppm",
    ).validate()
    img = tiling.render(_render_clouds(cfg, args.what), *cfg.resolution, cfg.complex_window())
    img.save(cfg.output_path)
    print(cfg.output_path)
    return 0


def cmd_cloud(args) -> int:
    cfg = RunConfig(args.a, args.system,
                    args.depth if args.depth is not None else tiling.default_depth(args.a, args.system),
                    None, (1, 1), 0, args.out or "-").validate()
    if args.translate:
        u = algebra.CubicInt(*args.translate)
        if automaton.lattice_coords(u, cfg.system) is None:
            raise UsageError(f"{u} is not a lattice translate for system {cfg.system}")
        c = tiling.boundary_cloud(cfg.a, u, cfg.depth, cfg.system)
    else:
        c = tiling.cloud(cfg.a, cfg.system, cfg.depth)
    text = tiling.write_csv(c)
    if cfg.output_path == "-":
        sys.stdout.write(text)
    else:
        Path(cfg.output_path).write_text(text)
    return 0


def cmd_curve(args) -> int:
    if args.points < 2:
        raise UsageError("--points must be >= 2")
    if args.terms < 1:
        raise UsageError("--terms must be >= 1")
    text = boundary2.write_curve_csv(boundary2.sample_curve(args.points, args.terms))
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    return 0


def cmd_cover(args) -> int:
    cfg = RunConfig(args.a, args.system,
                    args.depth if args.depth is not None else tiling.default_depth(args.a, args.system),
                    tuple(args.window), (1, 1), args.seed, "-").validate()
    rep = tiling.cover_check(cfg.a, cfg.system, cfg.complex_window(), args.samples,
                             depth=cfg.depth, seed=cfg.seed)
    print(json.dumps({
        "a": cfg.a, "system": cfg.system, "depth": cfg.depth, "samples": rep.samples,
        "eps": rep.eps, "failures": len(rep.failures), "max_distance": rep.max_distance,
    }, sort_keys=True))
    return 0 if rep.ok else 1


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------

def _claim(claims: list, claim: str, expected, computed, ok: bool) -> None:
    claims.append({"claim": claim, "expected": expected, "computed": computed, "pass": bool(ok)})


def build_report(a: int, depth: int | None = None) -> dict:
    claims: list[dict] = []
    doc: dict = {"schema_version": SCHEMA_VERSION, "a": a}

    aut_r = automaton.build_boundary_automaton(a, "R")
    aut_g = automaton.build_boundary_automaton(a, "G")
    diff = automaton.states_match_explicit(a, aut_r)
    doc["state_count"] = len(aut_r.states)
    doc["states"] = [_triple(s) for s in sorted(aut_r.states)]
    _claim(claims, "automaton states equal the explicit 15-element set",
           [_triple(s) for s in sorted(automaton.explicit_states(a))],
           doc["states"], diff.empty)

    for system, aut in (("G", aut_g), ("R", aut_r)):
        nb = sorted(automaton.neighbor_set(a, system, aut))
        doc[f"neighbors_{system}"] = [_triple(v) for v in nb]
        expected = sorted(automaton.expected_neighbors(a, system))
        _claim(claims, f"neighbour set of the {system} tile",
               [_triple(v) for v in expected], doc[f"neighbors_{system}"], nb == expected)

    if a != 2:
        doc["claims"] = claims
        return doc

    ring = algebra.ring_new(2)
    depth = depth or 22
    s = boundary2.dimension_boundary(2)
    s_rho = boundary2.dimension_from_rho()
    r = ring.abs_alpha
    doc["dimension"] = s
    doc["dimension_log_rho"] = s_rho
    _claim(claims, "boundary dimension", 1.359337357, s, abs(s - 1.359337357) <= 1e-3)
    _claim(claims, "Moran equation residual", 0.0, r ** (2 * s) + r ** (3 * s) + r ** (4 * s) - 1,
           abs(r ** (2 * s) + r ** (3 * s) + r ** (4 * s) - 1) <= 1e-12)
    _claim(claims, "dimension via log rho / log |alpha|", s, s_rho, abs(s - s_rho) <= 1e-10)

    ifs = boundary2.ifs_check(depth)
    doc["ifs"] = {
        "depth": ifs.depth, "radius": ifs.radius, "eps": ifs.eps,
        "hausdorff_union": ifs.dist_union, "hausdorff_g": ifs.dist_g,
        "min_distance_h0_h2": ifs.min_dist_h0_h2,
        "contact_h1_h2": [_cx(z) for z in ifs.near_h1_h2],
        "contact_h0_h1": [_cx(z) for z in ifs.near_h0_h1],
        "spread_h1_h2": ifs.spread_h1_h2, "spread_h0_h1": ifs.spread_h0_h1,
    }
    _claim(claims, "piece equals the union of its three images (Hausdorff)", f"<= {ifs.eps}",
           ifs.dist_union, ifs.dist_union <= ifs.eps)
    _claim(claims, "piece equals g of the second piece (Hausdorff)", f"<= {ifs.eps}",
           ifs.dist_g, ifs.dist_g <= ifs.eps)
    _claim(claims, "h0 and h2 images are disjoint", f"> {10 * ifs.radius}",
           ifs.min_dist_h0_h2, ifs.min_dist_h0_h2 > 10 * ifs.radius)
    _claim(claims, "h1 and h2 images touch at one point",
           _cx(algebra.embed(boundary2.H1_H2_CONTACT, ring)),
           [_cx(z) for z in ifs.near_h1_h2],
           len(ifs.near_h1_h2) == 1 and ifs.spread_h1_h2 <= boundary2.CONTACT_FACTOR * ifs.radius)
    _claim(claims, "h0 and h1 images touch at one point",
           _cx(algebra.embed(boundary2.H0_H1_CONTACT, ring)),
           [_cx(z) for z in ifs.near_h0_h1],
           len(ifs.near_h0_h1) == 1 and ifs.spread_h0_h1 <= boundary2.CONTACT_FACTOR * ifs.radius)

    singles = []
    for p in boundary2.intersection_points(depth):
        singles.append({
            "label": p.label, "first": _triple(p.first), "second": _triple(p.second),
            "value": _triple(p.value), "numeric": _cx(p.numeric),
            "distance_first": p.dist_first, "distance_second": p.dist_second,
            "clusters": len(p.clusters), "spread": p.spread,
        })
        _claim(claims, f"pieces {p.first} and {p.second} meet in one point",
               _cx(p.numeric), [_cx(z) for z in p.clusters], p.ok())
    doc["singletons"] = singles

    for label, u, target in (("(1+alpha)u", boundary2.ALPHA_PLUS_AM2, -1 + 0j),
                             ("(alpha-1)u", boundary2.ALPHA_INV, -ring.alpha)):
        b = boundary2.piece(u, depth)
        reps = tiling.cluster(b.points, 2 * b.radius)
        ok = len(reps) == 1 and abs(reps[0] - target) <= b.radius
        _claim(claims, f"tile meets its {label} translate in one point", _cx(target),
               [_cx(z) for z in reps], ok)

    gl = boundary2.gluing_identities()
    doc["gluing"] = [{"lhs": g.lhs, "rhs": g.rhs, "exact": g.exact, "residual": g.residual} for g in gl]
    _claim(claims, "gluing identities at -1", True, all(g.exact for g in gl),
           all(g.exact and g.residual <= 1e-12 for g in gl))

    f0, f1 = boundary2.param_f(0), boundary2.param_f(1)
    _claim(claims, "f(0) = -alpha - 1/alpha", _cx(-ring.alpha - 1 / ring.alpha), _cx(f0),
           abs(f0 + ring.alpha + 1 / ring.alpha) <= 1e-9)
    _claim(claims, "f(1) = -1", [-1.0, 0.0], _cx(f1), abs(f1 + 1) <= 1e-9)

    base = tiling.cloud(2, "R", depth)
    eps = 3 * base.radius
    doc["translate_overlap"] = {
        "note": "empirical proxy for disjoint interiors, not a proof",
        "threshold": OVERLAP_PROXY_LIMIT, "eps": eps,
        "fractions": {str(v): tiling.overlap_fraction(base, v, eps)
                      for v in sorted(automaton.expected_neighbors(2, "R"))},
    }
    doc["claims"] = claims
    return doc


def write_figures(a: int, directory: Path, depth: int | None = None) -> list[Path]:
    from . import plotting

    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for system in ("R", "G"):
        d = depth or tiling.default_depth(a, system)
        base = tiling.cloud(a, system, d)
        nb = sorted(automaton.neighbor_set(a, system))
        out.append(plotting.tiling_figure(base, nb, directory / f"tiling_a{a}_{system}.png"))
        pieces = [tiling.boundary_cloud(a, v, d, system) for v in nb]
        out.append(plotting.boundary_figure(base, pieces, directory / f"boundary_a{a}_{system}.png"))
    if a == 2:
        piece = boundary2.piece(boundary2.U, depth or 22)
        images = [(h.name, boundary2.apply_map(h, piece.points)) for h in boundary2.H]
        out.append(plotting.ifs_figure(piece, images, directory / "ifs_a2.png"))
        ring = algebra.ring_new(2)
        contacts = [("f(0)", boundary2.param_f(0)), ("f(1)", boundary2.param_f(1)),
                    ("h1(-1)", algebra.embed(boundary2.H0_H1_CONTACT, ring)),
                    ("h2(f(0))", algebra.embed(boundary2.H1_H2_CONTACT, ring))]
        out.append(plotting.curve_figure(boundary2.sample_curve(2001), contacts,
                                         directory / "curve_a2.png"))
    return out


def cmd_report(args) -> int:
    if args.a < 2:
        raise UsageError(f"--a must be >= 2, got {args.a}")
    if args.depth is not None and not 2 <= args.depth <= tiling.max_depth():
        raise UsageError(f"--depth must be in 2..{tiling.max_depth()}")
    doc = build_report(args.a, args.depth)
    text = json.dumps(doc, indent=1, sort_keys=True) + "\n"
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    if args.figures:
        for p in write_figures(args.a, Path(args.figures), args.depth):
            print(p, file=sys.stderr)
    failed = [c["claim"] for c in doc["claims"] if not c["pass"]]
    for c in failed:
        print(f"FAILED: {c}", file=sys.stderr)
    return 1 if failed else 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rauzy", description="Cubic Rauzy fractals for x^3 - a x^2 + x - 1.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, system_default="R"):
        sp.add_argument("--a", type=int, default=2)
        sp.add_argument("--system", choices=numeration.SYSTEMS, default=system_default)

    sp = sub.add_parser("expand", help="greedy expansion of an integer")
    common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=cmd_expand)

    sp = sub.add_parser("automaton", help="build the boundary automaton and export it")
    common(sp)
    sp.add_argument("--format", choices=("dot", "json"), default="dot")
    sp.add_argument("--out", help="output file ('-' for stdout)")
    sp.set_defaults(func=cmd_automaton)

    sp = sub.add_parser("render", help="write a PPM image")
    common(sp)
    sp.add_argument("--what", choices=("fractal", "tile", "boundary"), default="fractal")
    sp.add_argument("--depth", type=int)
    sp.add_argument("--window", type=float, nargs=4, metavar=("XMIN", "XMAX", "YMIN", "YMAX"))
    sp.add_argument("--resolution", type=int, nargs=2, metavar=("W", "H"), default=(800, 800))
    sp.add_argument("--seed", type=int, default=tiling.DEFAULT_SEED)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("cloud", help="CSV dump of a point cloud or boundary piece")
    common(sp)
    sp.add_argument("--depth", type=int)
    sp.add_argument("--translate", type=int, nargs=3, metavar=("C0", "C1", "C2"))
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_cloud)

    sp = sub.add_parser("curve", help="CSV samples of the boundary parametrisation (a=2)")
    sp.add_argument("--points", type=int, default=1001)
    sp.add_argument("--terms", type=int, default=40)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_curve)

    sp = sub.add_parser("cover", help="check that lattice translates cover a window")
    common(sp, "G")
    sp.add_argument("--depth", type=int)
    sp.add_argument("--window", type=float, nargs=4, default=(-2.0, 2.0, -2.0, 2.0),
                    metavar=("XMIN", "XMAX", "YMIN", "YMAX"))
    sp.add_argument("--samples", type=int, default=10_000)
    sp.add_argument("--seed", type=int, default=tiling.DEFAULT_SEED)
    sp.set_defaults(func=cmd_cover)

    sp = sub.add_parser("report", help="JSON report of the computed claims")
    sp.add_argument("--a", type=int, default=2)
    sp.add_argument("--depth", type=int)
    sp.add_argument("--out")
    sp.add_argument("--figures", metavar="DIR", help="also write PNG figures here")
    sp.set_defaults(func=cmd_report)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, tiling.DepthError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except automaton.StateBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
