"""The boundary automaton: pairs of admissible expansions of one point.

A state is the difference ``A_k`` between two expansions read up to index k,
rescaled so that it stays bounded exactly when both expansions converge to
the same point.  Reading the digit pair (e, f) at index k+1 moves

    A  ->  A / alpha + (e - f) alpha^2.

The construction explores the product of this value automaton with one
admissibility DFA per tape (so every path spells two admissible words),
prunes values by

    |A at beta| < beta^3      and      |A at alpha| <= 2(a-1)|alpha|^3/(1-|alpha|),

and finally keeps the nodes reachable from the start that can reach a cycle,
i.e. the nodes lying on infinite paths.
"""
from __future__ import annotations

import json
import logging
import re
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable

from . import algebra
from .algebra import CubicInt, ZERO
from .numeration import EventuallyPeriodicWord, check_system, dfa, eval_word

log = logging.getLogger(__name__)

DEFAULT_STATE_BUDGET = 10**6

Edge = tuple[CubicInt, tuple[int, int], CubicInt]


class StateBudgetExceeded(RuntimeError):
    """The bounded closure grew past its budget (a pruning bound is wrong)."""


@dataclass(frozen=True)
class BoundaryAutomaton:
    a: int
    system: str
    states: frozenset[CubicInt]
    edges: frozenset[Edge]
    initial: CubicInt = ZERO
    # every value met by the bounded closure, before trimming
    closure_states: frozenset[CubicInt] = field(default=frozenset(), compare=False)

    def successors(self, s: CubicInt) -> list[tuple[tuple[int, int], CubicInt]]:
        return sorted((lab, t) for (src, lab, t) in self.edges if src == s)


def step(s: CubicInt, e: int, f: int, a: int) -> CubicInt:
    """Transition A -> A/alpha + (e - f) alpha^2."""
    c0, c1, c2 = s
    return CubicInt(c0 + c1, c2 - a * c0, c0 + e - f)


def alpha_bound(a: int) -> float:
    """Radius of alpha R - alpha R: 2(a-1)|alpha|^3 / (1 - |alpha|)."""
    r = algebra.ring_new(a).abs_alpha
    return 2 * (a - 1) * r**3 / (1 - r)


# ---------------------------------------------------------------------------
# product exploration
# ---------------------------------------------------------------------------

@dataclass
class ProductGraph:
    """Explored product automaton.  Nodes are (value, q1, q2)."""

    a: int
    system: str
    start: tuple
    succ: dict = field(default_factory=dict)
    live: set = field(default_factory=set)

    def values(self, nodes: Iterable | None = None) -> set[CubicInt]:
        return {CubicInt(*n[0]) for n in (self.succ if nodes is None else nodes)}


def explore(
    a: int,
    system: str,
    start_value: CubicInt = ZERO,
    *,
    beta_bound: bool = True,
    budget: int = DEFAULT_STATE_BUDGET,
) -> ProductGraph:
    """Breadth-first bounded closure of the product automaton from
    ``(start_value, dfa start, dfa start)`` followed by the live-node trim."""
    algebra._check_a(a)
    check_system(system)
    ring = algebra.ring_new(a)
    al, be = ring.alpha, ring.beta
    a_lim = alpha_bound(a) + 1e-9
    b_lim = be**3
    trans = dfa(a, system).trans

    value_ok: dict[tuple, bool] = {}

    def ok(v):
        r = value_ok.get(v)
        if r is None:
            za = v[0] + al * (v[1] + al * v[2])
            r = abs(za) <= a_lim
            if r and beta_bound:
                r = abs(v[0] + be * (v[1] + be * v[2])) < b_lim
            value_ok[v] = r
        return r

    start = (tuple(start_value), 0, 0)
    succ: dict[tuple, list] = {}
    queue = deque([start])
    seen = {start}
    while queue:
        node = queue.popleft()
        (c0, c1, c2), q1, q2 = node
        base0, base1, base2 = c0 + c1, c2 - a * c0, c0
        row1, row2 = trans[q1], trans[q2]
        out = []
        for e in range(a):
            p1 = row1[e]
            if p1 < 0:
                continue
            for f in range(a):
                p2 = row2[f]
                if p2 < 0:
                    continue
                v = (base0, base1, base2 + e - f)
                if not ok(v):
                    continue
                nxt = (v, p1, p2)
                out.append(((e, f), nxt))
                if nxt not in seen:
                    seen.add(nxt)
                    if len(seen) > budget:
                        raise StateBudgetExceeded(
                            f"bounded closure exceeded {budget} product states (a={a})"
                        )
                    queue.append(nxt)
        succ[node] = out

    graph = ProductGraph(a=a, system=system, start=start, succ=succ)
    graph.live = _live_nodes(succ)
    return graph


def _live_nodes(succ: dict) -> set:
    """Nodes with an infinite forward path (repeatedly drop dead ends)."""
    pred = defaultdict(list)
    outdeg = {}
    for n, outs in succ.items():
        targets = {t for _, t in outs}
        outdeg[n] = len(targets)
        for t in targets:
            pred[t].append(n)
    dead = deque(n for n, d in outdeg.items() if d == 0)
    removed = set()
    while dead:
        n = dead.popleft()
        if n in removed:
            continue
        removed.add(n)
        for p in pred[n]:
            if p in removed:
                continue
            outdeg[p] -= 1
            if outdeg[p] == 0:
                dead.append(p)
    return set(succ) - removed


def build_boundary_automaton(
    a: int, system: str = "R", *, budget: int = DEFAULT_STATE_BUDGET
) -> BoundaryAutomaton:
    """Explore from the zero state and trim to states on infinite paths."""
    g = explore(a, system, ZERO, beta_bound=True, budget=budget)
    live = g.live
    states = {CubicInt(*n[0]) for n in live}
    edges = set()
    for n in live:
        for lab, t in g.succ[n]:
            if t in live:
                edges.add((CubicInt(*n[0]), lab, CubicInt(*t[0])))
    log.debug("a=%d %s: %d product nodes, %d live, %d states",
              a, system, len(g.succ), len(live), len(states))
    return BoundaryAutomaton(
        a=a,
        system=system,
        states=frozenset(states),
        edges=frozenset(edges),
        closure_states=frozenset(g.values()),
    )


# ---------------------------------------------------------------------------
# the explicit state set
# ---------------------------------------------------------------------------

def explicit_states(a: int) -> frozenset[CubicInt]:
    """{0, ±alpha, ±alpha^2, ±(alpha - alpha^2), ±(1 + (a-1)alpha^2),
    ±(1 + (a-2)alpha^2), ±(1 - alpha + (a-1)alpha^2), ±(1 - 2alpha + a alpha^2)}"""
    pos = [
        CubicInt(0, 1, 0),
        CubicInt(0, 0, 1),
        CubicInt(0, 1, -1),
        CubicInt(1, 0, a - 1),
        CubicInt(1, 0, a - 2),
        CubicInt(1, -1, a - 1),
        CubicInt(1, -2, a),
    ]
    out = {ZERO}
    for s in pos:
        out.add(s)
        out.add(algebra.neg(s))
    return frozenset(out)


@dataclass(frozen=True)
class StateDiff:
    missing: frozenset[CubicInt]
    extra: frozenset[CubicInt]

    @property
    def empty(self) -> bool:
        return not self.missing and not self.extra

    def summary(self) -> str:
        if self.empty:
            return "MATCH"
        fmt = lambda xs: " ".join(str(x) for x in sorted(xs))  # noqa: E731
        return f"MISMATCH missing=[{fmt(self.missing)}] extra=[{fmt(self.extra)}]"


def states_match_explicit(a: int, automaton: BoundaryAutomaton | None = None) -> StateDiff:
    if automaton is None:
        automaton = build_boundary_automaton(a, "R")
    expected = explicit_states(a)
    return StateDiff(
        missing=frozenset(expected - automaton.states),
        extra=frozenset(automaton.states - expected),
    )


# ---------------------------------------------------------------------------
# neighbours
# ---------------------------------------------------------------------------

def lattice_coords(v: CubicInt, system: str) -> tuple[int, int] | None:
    """Integer coordinates of v in the tiling lattice, or None.

    G: basis (1, alpha); R: basis (u, alpha u) with u = alpha - 1, whose
    span is exactly the triples with c0 + c1 + c2 = 0.
    """
    c0, c1, c2 = v
    if check_system(system) == "G":
        return (c0, c1) if c2 == 0 else None
    if c0 + c1 + c2 != 0:
        return None
    # x u + y alpha u = -x + (x - y) alpha + y alpha^2
    return (-c0, c2)


def lattice_point(x: int, y: int, system: str, a: int) -> CubicInt:
    if check_system(system) == "G":
        return CubicInt(x, y, 0)
    return CubicInt(-x, x - y, y)


@dataclass(frozen=True)
class NeighborReport:
    translates: frozenset[CubicInt]
    rejected: frozenset[CubicInt]  # states whose w/alpha is off the lattice


def neighbor_report(automaton: BoundaryAutomaton, system: str | None = None) -> NeighborReport:
    system = automaton.system if system is None else check_system(system)
    a = automaton.a
    keep, rejected = set(), set()
    for w in automaton.states:
        if w == ZERO:
            rejected.add(w)
            continue
        cand = algebra.alpha_inv_mul(w, a)
        if lattice_coords(cand, system) is None:
            rejected.add(w)
        else:
            keep.add(cand)
    keep |= {algebra.neg(v) for v in keep}
    if rejected:
        log.debug("a=%d %s: states off the lattice: %s", a, system,
                  ", ".join(str(w) for w in sorted(rejected)))
    return NeighborReport(frozenset(keep), frozenset(rejected))


def neighbor_set(
    a: int, system: str = "G", automaton: BoundaryAutomaton | None = None
) -> frozenset[CubicInt]:
    """Lattice translates v != 0 with tile ∩ (tile + v) non-empty."""
    if automaton is None:
        automaton = build_boundary_automaton(a, system)
    return neighbor_report(automaton, system).translates


def expected_neighbors(a: int, system: str) -> frozenset[CubicInt]:
    """{±1, ±alpha, ±(alpha-1)} for G; {±u, ±alpha u, ±(1+alpha)u, ±(1-alpha)u} for R."""
    if check_system(system) == "G":
        base = [CubicInt(1, 0, 0), CubicInt(0, 1, 0), CubicInt(-1, 1, 0)]
    else:
        u = CubicInt(-1, 1, 0)
        al = algebra.ALPHA
        base = [
            u,
            algebra.cubic_mul(al, u, a),
            algebra.cubic_mul(algebra.add(algebra.ONE, al), u, a),
            algebra.cubic_mul(algebra.sub(algebra.ONE, al), u, a),
        ]
    return frozenset(base + [algebra.neg(b) for b in base])


# ---------------------------------------------------------------------------
# double expansions realising a translate
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DoubleExpansionWitness:
    """left = u + right, both words admissible and starting at index 2."""

    translate: CubicInt
    left: EventuallyPeriodicWord
    right: EventuallyPeriodicWord

    def value(self, a: int) -> complex:
        return eval_word(self.left, algebra.ring_new(a))

    def residual(self, a: int) -> float:
        ring = algebra.ring_new(a)
        return abs(eval_word(self.left, ring) - algebra.embed(self.translate, ring)
                   - eval_word(self.right, ring))


def translate_graph(a: int, u: CubicInt, system: str, budget: int = DEFAULT_STATE_BUDGET) -> ProductGraph:
    """Product automaton for z = sum_{i>=2} e_i alpha^i = u + sum_{i>=2} f_i alpha^i.

    Before index 2 is read the scaled difference is -alpha u.  The beta-side
    bound is not used here because the translate shifts it; the alpha bound
    alone keeps the exploration finite.
    """
    start = algebra.neg(algebra.alpha_mul(u, a))
    return explore(a, system, start, beta_bound=False, budget=budget)


def enumerate_double_expansions(
    a: int,
    u: CubicInt,
    depth: int,
    system: str = "R",
    *,
    limit: int = 10_000,
) -> list[DoubleExpansionWitness]:
    """Eventually periodic pairs (left, right) with left = u + right.

    Walks the live part of the translate product automaton depth-first; a
    witness is emitted whenever the current path revisits one of its own
    nodes (a cycle closes).  Empty output means u is not realised within
    ``depth`` digits.
    """
    g = translate_graph(a, u, system)
    if g.start not in g.live:
        return []
    live = g.live
    succ = {n: [(lab, t) for lab, t in outs if t in live] for n, outs in g.succ.items() if n in live}
    found: dict[tuple, DoubleExpansionWitness] = {}
    path_nodes = [g.start]
    index_of = {g.start: 0}
    labels: list[tuple[int, int]] = []

    def emit(loop_at: int):
        pre_l = [lab[0] for lab in labels[:loop_at]]
        pre_r = [lab[1] for lab in labels[:loop_at]]
        cyc_l = [lab[0] for lab in labels[loop_at:]]
        cyc_r = [lab[1] for lab in labels[loop_at:]]
        left = EventuallyPeriodicWord(tuple(reversed(pre_l)), tuple(cyc_l), 2)
        right = EventuallyPeriodicWord(tuple(reversed(pre_r)), tuple(cyc_r), 2)
        key = (str(left), str(right))
        if key not in found:
            found[key] = DoubleExpansionWitness(u, left, right)

    def dfs():
        node = path_nodes[-1]
        if len(found) >= limit:
            return
        for lab, t in sorted(succ[node]):
            labels.append(lab)
            if t in index_of:
                emit(index_of[t])
            elif len(labels) < depth:
                index_of[t] = len(path_nodes)
                path_nodes.append(t)
                dfs()
                path_nodes.pop()
                del index_of[t]
            labels.pop()

    dfs()
    return [found[k] for k in sorted(found)]


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------

def _node_name(s: CubicInt) -> str:
    return f"\"({s[0]},{s[1]},{s[2]})\""


def export_dot(automaton: BoundaryAutomaton) -> str:
    lines = [f"digraph boundary_a{automaton.a}_{automaton.system} {{"]
    lines.append(f"  // initial state {_node_name(automaton.initial)}")
    for s in sorted(automaton.states):
        shape = "doublecircle" if s == automaton.initial else "circle"
        lines.append(f"  {_node_name(s)} [shape={shape}];")
    for s, (e, f), t in sorted(automaton.edges):
        lines.append(f"  {_node_name(s)} -> {_node_name(t)} [label=\"{e}|{f}\"];")
    lines.append("}")
    return "\n".join(lines) + "\n"


_DOT_NODE = re.compile(r'^\s*"\((-?\d+),(-?\d+),(-?\d+)\)"\s*\[shape=\w+\];$')
_DOT_EDGE = re.compile(
    r'^\s*"\((-?\d+),(-?\d+),(-?\d+)\)"\s*->\s*"\((-?\d+),(-?\d+),(-?\d+)\)"\s*\[label="(\d+)\|(\d+)"\];$'
)


def parse_dot(text: str) -> tuple[list[CubicInt], list[Edge]]:
    """Read back the node and edge lists written by :func:`export_dot`."""
    nodes, edges = [], []
    for line in text.splitlines():
        m = _DOT_EDGE.match(line)
        if m:
            v = [int(x) for x in m.groups()]
            edges.append((CubicInt(*v[0:3]), (v[6], v[7]), CubicInt(*v[3:6])))
            continue
        m = _DOT_NODE.match(line)
        if m:
            nodes.append(CubicInt(*(int(x) for x in m.groups())))
    return nodes, edges


def export_json(automaton: BoundaryAutomaton) -> str:
    doc = {
        "a": automaton.a,
        "system": automaton.system,
        "initial": list(automaton.initial),
        "states": [list(s) for s in sorted(automaton.states)],
        "edges": [
            {"source": list(s), "label": [e, f], "target": list(t)}
            for s, (e, f), t in sorted(automaton.edges)
        ],
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def automaton_from_json(text: str) -> BoundaryAutomaton:
    doc = json.loads(text)
    return BoundaryAutomaton(
        a=doc["a"],
        system=doc["system"],
        states=frozenset(CubicInt(*s) for s in doc["states"]),
        edges=frozenset(
            (CubicInt(*e["source"]), tuple(e["label"]), CubicInt(*e["target"])) for e in doc["edges"]
        ),
        initial=CubicInt(*doc["initial"]),
    )
