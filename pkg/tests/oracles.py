"""Reference computations that share no code with the package.

Each one takes a different route to the same value: brute-force enumeration
instead of automata, polynomial long division instead of the reduction
formula, numpy's companion-matrix roots instead of bisection, and so on.
"""
from __future__ import annotations

import itertools
import math

import numpy as np


# --- polynomial arithmetic in Z[x]/(x^3 - a x^2 + x - 1) -------------------

def poly_mod(coeffs, a):
    """Remainder of an ascending coefficient list by x^3 - a x^2 + x - 1."""
    c = list(coeffs)
    for k in range(len(c) - 1, 2, -1):
        lead = c[k]
        if lead:
            # x^k = x^(k-3) * (a x^2 - x + 1)
            c[k] = 0
            c[k - 1] += a * lead
            c[k - 2] -= lead
            c[k - 3] += lead
    c += [0] * (3 - len(c))
    return tuple(c[:3])


def poly_mul(x, y, a):
    prod = [0] * (len(x) + len(y) - 1)
    for i, xi in enumerate(x):
        for j, yj in enumerate(y):
            prod[i + j] += xi * yj
    return poly_mod(prod, a)


def x_power(n, a):
    """x^n mod the cubic for n >= 0, by long division of the monomial."""
    return poly_mod([0] * n + [1], a)


# --- roots ---------------------------------------------------------------

def roots(a):
    """(beta, alpha) from numpy's eigenvalue-based root finder."""
    r = np.roots([1, -a, 1, -1])
    beta = max(z.real for z in r if abs(z.imag) < 1e-9)
    alpha = next(z for z in r if z.imag > 1e-9)
    return float(beta), complex(alpha)


def bisect(f, lo, hi, iters=200):
    flo = f(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if (f(mid) < 0) == (flo < 0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# --- sequences and words ---------------------------------------------------

def recurrence(first3, a, n):
    s = list(first3)
    while len(s) < n:
        s.append(a * s[-1] - s[-2] + s[-3])
    return s[:n]


def R_seq(a, n):
    return recurrence([1, a, a * a], a, n)


def G_seq(a, n):
    return recurrence([1, a, a * a - 1], a, n)


def window_ok(asc, a, system):
    """Direct reading of the admissibility rule on an ascending digit list
    (index 0 first): every 4-window read from the top must be
    lexicographically below (a-1)(a-1)01, zeros padded below index 0."""
    limit = (a - 1, a - 1, 0, 1)
    pad = [0, 0, 0] + list(asc)
    for i in range(3, len(pad)):
        w = (pad[i], pad[i - 1], pad[i - 2], pad[i - 3])
        if not w < limit:
            return False
    if system == "G":
        e = list(asc) + [0, 0, 0]
        if not e[0] < a:
            return False
        if not (e[1], e[0]) < (a - 1, a - 1):
            return False
        if not (e[2], e[1], e[0]) < (a - 1, a - 1, 0):
            return False
    return True


def admissible_words(a, length, system):
    """All admissible ascending digit tuples of exactly ``length`` positions."""
    return [w for w in itertools.product(range(a), repeat=length) if window_ok(w, a, system)]


# --- digit rewriting as a two-state transducer -------------------------------

def psi_transducer(digits):
    """Flag F = "the current run of ones was preceded by a 0 (or by an odd
    number of flips)".  A 1 passes through and toggles F; a 0 or 2 is
    flipped when F is set, then sets F (for 0) or clears it (for 2)."""
    out = []
    flip = False
    for d in digits:
        if d == 1:
            out.append(1)
            flip = not flip
        else:
            out.append(2 - d if flip else d)
            flip = d == 0
    return tuple(out)


# --- dimension ---------------------------------------------------------------

def rho_numpy():
    r = np.roots([1, 1, 1, 0, -1])
    return float(max(z.real for z in r if abs(z.imag) < 1e-12 and 0 < z.real < 1))


def dimension_closed_form(abs_alpha):
    return math.log(rho_numpy()) / math.log(abs_alpha)
