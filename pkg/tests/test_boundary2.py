import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rauzy import algebra, boundary2 as b2
from rauzy.algebra import CubicInt

import oracles

RING = algebra.ring_new(2)
AL = RING.alpha
ABS = RING.abs_alpha

ternary_digits = st.lists(st.integers(0, 2), max_size=30)


@pytest.fixture(scope="module")
def ifs_report():
    return b2.ifs_check(22)


# --- the maps ----------------------------------------------------------------

def test_translate_constants():
    assert b2.U == CubicInt(-1, 1, 0)
    assert b2.ONE_PLUS_AM2 == algebra.cubic_mul(b2.U, algebra.ALPHA, 2)
    assert b2.ALPHA_INV == algebra.cubic_mul(b2.U, CubicInt(-1, 1, 0), 2)
    assert b2.ALPHA_PLUS_AM2 == algebra.cubic_mul(b2.U, CubicInt(1, 1, 0), 2)
    # alpha - 1 = alpha^-3 + alpha^-1
    assert b2.U == algebra.add(algebra.alpha_pow(-3, 2), algebra.alpha_pow(-1, 2))


def test_h2_fixed_point_is_minus_one():
    h2 = b2.H[2]
    assert b2.apply_map(h2, b2.MINUS_ONE) == b2.MINUS_ONE
    assert abs(b2.fixed_point(h2) + 1) <= 1e-12
    assert abs((AL**2 + AL**3) / (1 - AL**4) + 1) <= 1e-12


def test_map_examples():
    h0, h1, h2 = b2.H
    assert b2.apply_map(h1, b2.MINUS_ONE) == b2.H0_H1_CONTACT
    assert abs(h1(-1) - (-1 - AL**3)) <= 1e-12
    z = algebra.neg(algebra.add(algebra.ALPHA, algebra.alpha_pow(-1, 2)))
    assert b2.apply_map(h2, z) == b2.H1_H2_CONTACT
    assert abs(h2(-AL - 1 / AL) - (-1 - AL**2 - AL**4)) <= 1e-12
    assert [h.ratio for h in b2.H] == pytest.approx([ABS**2, ABS**3, ABS**4])


@settings(max_examples=100, deadline=None)
@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50), st.sampled_from(["g", "h0", "h1", "h2"]))
def test_exact_and_numeric_maps_agree(c0, c1, c2, name):
    x = CubicInt(c0, c1, c2)
    m = b2.MAPS[name]
    exact = algebra.embed(b2.apply_map(m, x), RING)
    assert abs(exact - b2.apply_map(m, algebra.embed(x, RING))) <= 1e-9 * (1 + abs(exact))


def test_compose_order():
    z = 0.3 + 0.1j
    assert b2.compose("h2 h0", z) == b2.H[2](b2.H[0](z))
    assert b2.compose(["h1"], z) == b2.H[1](z)


def test_h2_telescoping():
    rng = random.Random(11)
    for _ in range(10):
        z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        w = z
        for n in range(1, 21):
            w = b2.H[2](w)
            assert abs(w + 1) <= ABS ** (4 * n) * abs(z + 1) + 1e-14


# --- IFS structure -----------------------------------------------------------

def test_ifs_distances(ifs_report):
    rep = ifs_report
    assert rep.eps == pytest.approx(4 * rep.radius)
    assert rep.ok
    assert rep.dist_union <= 4 * rep.radius and rep.dist_g <= 4 * rep.radius


def test_ifs_contacts(ifs_report):
    rep = ifs_report
    assert rep.min_dist_h0_h2 > 10 * rep.radius
    assert len(rep.near_h1_h2) == 1 and len(rep.near_h0_h1) == 1
    assert rep.contacts_ok()


def test_ifs_check_fails_for_wrong_piece():
    """Swapping in the wrong cloud must break the self-similarity check."""
    wrong = b2.piece(b2.ALPHA_INV, 22).points
    images = np.concatenate([b2.apply_map(h, wrong) for h in b2.H])
    from rauzy import tiling

    assert tiling.hausdorff(b2.piece(b2.U, 22).points, images) > 10 * b2.piece(b2.U, 22).radius


def test_intersection_points():
    pts = b2.intersection_points(22)
    assert [p.label for p in pts] == ["a", "b", "c"]
    expected = [-1, -AL - 1 / AL, -AL]
    for p, z in zip(pts, expected):
        assert abs(p.numeric - z) <= 1e-12
        assert p.ok(), p
    assert pts[1].value == CubicInt(-1, 1, -1)


# --- ternary words and psi -----------------------------------------------------

def test_ternary_examples():
    assert b2.ternary(Fraction(1, 3)) == b2.TernaryWord((1,), 0)
    assert b2.ternary(Fraction(1, 3), twin=True) == b2.TernaryWord((0,), 2)
    assert b2.ternary(1 / 3, twin=True) == b2.TernaryWord((0,), 2)
    assert b2.ternary(1) == b2.TernaryWord((), 2)
    assert b2.ternary(0, twin=True) == b2.TernaryWord((), 0)
    assert b2.ternary(Fraction(1, 2)) == b2.TernaryWord((), 1)
    assert str(b2.ternary(Fraction(5, 9))) == "12(0)*"
    with pytest.raises(ValueError):
        b2.ternary(Fraction(4, 3))
    with pytest.raises(ValueError):
        b2.TernaryWord((3,))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 3**8), st.integers(0, 8))
def test_ternary_value_roundtrip(num, j):
    t = Fraction(num % (3**j + 1), 3**j)
    for twin in (False, True):
        assert b2.ternary(t, twin=twin).value() == t


def test_psi_examples():
    assert b2.psi("02") == (0, 0)
    assert b2.psi("110") == (1, 1, 0)
    assert b2.psi((1,) * 25) == (1,) * 25
    assert b2.psi(()) == ()
    with pytest.raises(ValueError):
        b2.psi("013")


@settings(max_examples=500, deadline=None)
@given(ternary_digits)
def test_psi_matches_transducer(digits):
    assert b2.psi(digits) == oracles.psi_transducer(digits)


@settings(max_examples=200, deadline=None)
@given(ternary_digits)
def test_psi_length_and_prefix(digits):
    out = b2.psi(digits)
    assert len(out) == len(digits)
    for k in range(len(digits) + 1):
        assert b2.psi(digits[:k]) == out[:k]


def test_psi_has_no_hidden_state():
    rng = random.Random(5)
    words = [tuple(rng.randrange(3) for _ in range(rng.randrange(20))) for _ in range(200)]
    first = {w: b2.psi(w) for w in words}
    rng.shuffle(words)
    assert all(b2.psi(w) == first[w] for w in words)


# --- the parametrisation -----------------------------------------------------------

def test_endpoints():
    assert abs(b2.param_f(0, 40) - (-AL - 1 / AL)) <= 1e-9
    assert abs(b2.param_f(1, 40) - (-1)) <= 1e-9


def test_start_point_irrelevant():
    for t in (Fraction(1, 7), Fraction(2, 5)):
        a, b = b2.param_f(t, 40), b2.param_f(t, 40, x0=2 + 1j)
        assert abs(a - b) <= b2.truncation_bound(40) + b2.truncation_bound(40, 2 + 1j)


def test_twin_representations_agree():
    bound = 2 * ABS ** 80 * b2.diam_piece()
    assert abs(b2.param_f(Fraction(1, 3)) - b2.param_f(Fraction(1, 3), twin=True)) <= bound
    rng = random.Random(3)
    for _ in range(100):
        j = rng.randint(1, 10)
        t = Fraction(rng.randint(1, 3**j - 1), 3**j)
        assert abs(b2.param_f(t) - b2.param_f(t, twin=True)) <= bound


def test_diam_piece():
    d = b2.diam_piece()
    z = b2.piece(b2.U).points
    brute = np.abs(z[:, None][::50] - z[None, :]).max()
    assert brute <= d <= brute + 3 * b2.piece(b2.U).radius


def _first_difference(x, y):
    return next(i for i, (p, q) in enumerate(zip(x, y)) if p != q) + 1


def test_holder_bound():
    rng = random.Random(17)
    diam = b2.diam_piece()
    for _ in range(500):
        x = tuple(rng.randrange(3) for _ in range(40))
        k = rng.randint(1, 12)
        y = x[: k - 1] + tuple(d for d in [rng.choice([e for e in range(3) if e != x[k - 1]])]) \
            + tuple(rng.randrange(3) for _ in range(40 - k))
        assert _first_difference(x, y) == k
        fx = b2.param_f(b2.TernaryWord(x), 40)
        fy = b2.param_f(b2.TernaryWord(y), 40)
        assert abs(fx - fy) <= (1 + ABS) * ABS ** (2 * k - 3) * diam


def test_injective_on_random_pairs():
    rng = random.Random(23)
    bound = b2.truncation_bound(40)
    for _ in range(200):
        x = tuple(rng.randrange(3) for _ in range(40))
        y = tuple(rng.randrange(3) for _ in range(40))
        if x == y:
            continue
        # 0-tailed words of distinct digits are distinct reals, never a twin pair
        assert abs(b2.param_f(b2.TernaryWord(x), 40) - b2.param_f(b2.TernaryWord(y), 40)) > 2 * bound


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=1, max_size=25))
def test_exact_composition_matches_numeric(digits):
    x = b2.param_f_exact(digits)
    w = b2.TernaryWord(tuple(digits))
    # finite prefix composition started at -1; embedding large coefficients
    # loses digits to cancellation, so the tolerance scales with them
    tol = 1e-14 * (1 + max(abs(c) for c in x))
    assert abs(algebra.embed(x, RING) - b2.param_f(w, len(digits))) <= tol


def test_curve_csv(tmp_path):
    s = b2.sample_curve(5, 30)
    text = b2.write_curve_csv(s, tmp_path / "c.csv")
    lines = text.splitlines()
    assert lines[0] == "t,re,im" and len(lines) == 6
    t, re_, im = map(float, lines[-1].split(","))
    assert t == 1 and complex(re_, im) == pytest.approx(-1, abs=1e-9)
    assert (tmp_path / "c.csv").read_text() == text


def test_param_rejects_zero_terms():
    with pytest.raises(ValueError):
        b2.param_f(0.5, 0)


# --- gluing and dimension -------------------------------------------------------------

def test_gluing_identities():
    ids = b2.gluing_identities()
    assert len(ids) == 4
    for g in ids:
        assert g.exact, g
        assert g.residual <= 1e-12


def test_moran_examples():
    assert b2.moran_solve([0.5, 0.5]) == pytest.approx(1, abs=1e-12)
    assert b2.moran_solve([1 / 3] * 3) == pytest.approx(1, abs=1e-12)
    assert b2.moran_solve([0.5]) == 0.0
    for bad in ([], [0.5, 1.0], [0.0, 0.5], [-0.2]):
        with pytest.raises(ValueError):
            b2.moran_solve(bad)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(0.05, 0.95), min_size=2, max_size=6))
def test_moran_residual(ratios):
    s = b2.moran_solve(ratios)
    assert abs(sum(r**s for r in ratios) - 1) <= 1e-12


def test_dimension():
    s = b2.dimension_boundary(2)
    assert abs(s - 1.359337357) <= 1e-3
    assert abs(ABS ** (2 * s) + ABS ** (3 * s) + ABS ** (4 * s) - 1) <= 1e-12
    assert abs(s - b2.dimension_from_rho()) <= 1e-10
    assert abs(s - oracles.dimension_closed_form(ABS)) <= 1e-10
    assert b2.rho_root() == pytest.approx(oracles.rho_numpy(), abs=1e-12)
    with pytest.raises(ValueError):
        b2.dimension_boundary(3)
