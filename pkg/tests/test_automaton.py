import json

import pytest

from rauzy import algebra, automaton as am
from rauzy.algebra import ALPHA, ALPHA2, ZERO, CubicInt
from rauzy.numeration import eval_word, is_admissible

A_RANGE = range(2, 11)


@pytest.fixture(scope="module")
def built():
    return {(a, s): am.build_boundary_automaton(a, s) for a in A_RANGE for s in "RG"}


def test_step_examples():
    assert am.step(ZERO, 1, 0, 2) == ALPHA2
    assert am.step(ALPHA2, 0, 0, 2) == ALPHA
    for a in (2, 3, 5):
        for t in range(a - 1):
            assert am.step(ALPHA2, t, t + 1, a) == CubicInt(0, 1, -1)


def test_explicit_states_formula():
    s2 = am.explicit_states(2)
    assert len(s2) == 15
    # 1 + (a-2) alpha^2 collapses to 1 when a = 2
    assert CubicInt(1, 0, 0) in s2 and CubicInt(-1, 0, 0) in s2
    for a in A_RANGE:
        assert len(am.explicit_states(a)) == 15


@pytest.mark.parametrize("a", A_RANGE)
def test_states_match(built, a):
    d = am.states_match_explicit(a, built[(a, "R")])
    assert d.empty, d.summary()
    assert d.summary() == "MATCH"


def test_untrimmed_closure_is_larger(built):
    aut = built[(2, "R")]
    assert CubicInt(1, 0, -1) in aut.closure_states
    assert aut.closure_states > aut.states


@pytest.mark.parametrize("a", A_RANGE)
@pytest.mark.parametrize("system", "RG")
def test_edge_and_symmetry_invariants(built, a, system):
    aut = built[(a, system)]
    edges = aut.edges
    for s, (e, f), t in edges:
        # exact identity, re-derived through general multiplication
        inv = algebra.cubic_mul(s, algebra.alpha_pow(-1, a), a)
        assert t == algebra.add(inv, algebra.scale(ALPHA2, e - f))
        assert (algebra.neg(s), (f, e), algebra.neg(t)) in edges
    assert all(algebra.neg(s) in aut.states for s in aut.states)
    # every state has |c0| <= 1
    assert max(abs(s[0]) for s in aut.states) <= 1


@pytest.mark.parametrize("a", [2, 3, 6])
def test_states_reachable_and_on_cycles(built, a):
    aut = built[(a, "R")]
    succ = {}
    for s, _, t in aut.edges:
        succ.setdefault(s, set()).add(t)
    seen, stack = {ZERO}, [ZERO]
    while stack:
        for t in succ.get(stack.pop(), ()):
            if t not in seen:
                seen.add(t)
                stack.append(t)
    assert seen == set(aut.states)
    # everything has a successor inside the state set, so infinite paths exist
    assert all(succ.get(s) for s in aut.states)


def test_state_budget_reported():
    with pytest.raises(am.StateBudgetExceeded):
        am.build_boundary_automaton(3, "R", budget=10)


@pytest.mark.parametrize("a", A_RANGE)
def test_neighbors(built, a):
    g = am.neighbor_set(a, "G", built[(a, "G")])
    assert g == am.expected_neighbors(a, "G")
    assert g == {CubicInt(1, 0, 0), CubicInt(-1, 0, 0), ALPHA, algebra.neg(ALPHA),
                 CubicInt(-1, 1, 0), CubicInt(1, -1, 0)}
    r = am.neighbor_set(a, "R", built[(a, "R")])
    assert len(r) == 8 and r == am.expected_neighbors(a, "R")
    assert all(algebra.neg(v) in r for v in r)


@pytest.mark.parametrize("a", [2, 4, 9])
def test_rejected_states_for_R(built, a):
    rep = am.neighbor_report(built[(a, "R")], "R")
    excluded = {ZERO, ALPHA, ALPHA2, CubicInt(1, 0, a - 1)}
    excluded |= {algebra.neg(x) for x in excluded}
    assert rep.rejected == excluded


def test_lattice_coords_roundtrip():
    for system in "RG":
        for x in range(-4, 5):
            for y in range(-4, 5):
                v = am.lattice_point(x, y, system, 3)
                assert am.lattice_coords(v, system) == (x, y)
    assert am.lattice_coords(CubicInt(0, 0, 1), "G") is None
    assert am.lattice_coords(CubicInt(1, 0, 0), "R") is None


def _check_witness(w, a, system, depth):
    ring = algebra.ring_new(a)
    assert is_admissible(w.left, a, system) and is_admissible(w.right, a, system)
    assert w.residual(a) <= 1e-12
    # truncation at depth N stays within the stated tolerance
    lt = eval_word(w.left.truncate(depth), ring)
    rt = eval_word(w.right.truncate(depth), ring)
    bound = 2 * (a - 1) * ring.abs_alpha ** (depth + 1) / (1 - ring.abs_alpha)
    assert abs(lt - algebra.embed(w.translate, ring) - rt) <= bound + 1e-12


def test_witness_minus_one():
    u = CubicInt(-1, 0, 1)  # alpha^-2 + alpha for a = 2
    assert u == algebra.add(algebra.alpha_pow(-2, 2), ALPHA)
    ws = am.enumerate_double_expansions(2, u, 14, "R")
    assert ws
    vals = {complex(round(w.value(2).real, 12), round(w.value(2).imag, 12)) for w in ws}
    assert len(vals) == 1
    assert abs(ws[0].value(2) + 1) <= 1e-12
    for w in ws:
        _check_witness(w, 2, "R", 14)


def test_witness_minus_alpha():
    u = algebra.alpha_pow(-1, 2)
    ws = am.enumerate_double_expansions(2, u, 14, "R")
    ring = algebra.ring_new(2)
    assert ws and all(abs(w.value(2) + ring.alpha) <= 1e-12 for w in ws)
    for w in ws:
        _check_witness(w, 2, "R", 14)


def test_witness_minus_alpha_cubed_for_G():
    ws = am.enumerate_double_expansions(2, CubicInt(1, 0, 0), 12, "G")
    ring = algebra.ring_new(2)
    target = -ring.alpha**3
    hits = [w for w in ws if abs(w.value(2) - target) <= 1e-12]
    assert hits
    for w in ws:
        _check_witness(w, 2, "G", 12)


@pytest.mark.parametrize("a", [2, 3])
def test_every_neighbor_is_realised(built, a):
    for system in "RG":
        for u in am.neighbor_set(a, system, built[(a, system)]):
            assert am.enumerate_double_expansions(a, u, 16, system, limit=5)


def test_non_neighbor_has_no_witness():
    # lattice points that are not neighbours: 2 for G, 2u for R
    assert am.enumerate_double_expansions(2, CubicInt(2, 0, 0), 16, "G") == []
    assert am.enumerate_double_expansions(2, CubicInt(-2, 2, 0), 16, "R") == []


def test_dot_export(built):
    aut = built[(2, "R")]
    text = am.export_dot(aut)
    assert text == am.export_dot(built[(2, "R")])
    nodes, edges = am.parse_dot(text)
    assert len(nodes) == 15
    assert sorted(nodes) == sorted(aut.states)
    assert sorted(edges) == sorted(aut.edges)


def test_dot_of_trivial_automaton():
    aut = am.BoundaryAutomaton(a=2, system="R", states=frozenset({ZERO}), edges=frozenset())
    nodes, edges = am.parse_dot(am.export_dot(aut))
    assert nodes == [ZERO] and edges == []


def test_json_export_roundtrip(built):
    aut = built[(5, "G")]
    text = am.export_json(aut)
    assert text == am.export_json(am.automaton_from_json(text))
    back = am.automaton_from_json(text)
    assert back.states == aut.states and back.edges == aut.edges
    doc = json.loads(text)
    assert doc["states"] == sorted(doc["states"])
