"""R- and G-numeration for x^3 - a x^2 + x - 1.

Words are digit sequences over {0, ..., a-1}.  A :class:`DigitWord` stores its
digits most-significant first together with the index of its least
significant digit (``offset``), so ``DigitWord((1, 0, 1, 1), 0)`` is
``alpha^3 + alpha + 1`` (or the integer ``R_3 + R_1 + R_0``).

Admissibility is the lexicographic window condition

    w_i w_{i-1} w_{i-2} w_{i-3} <_lex (a-1)(a-1)01   for every i,

with zeros below the offset.  System ``"G"`` adds the three low-end
conditions of greedy G-expansions at the offset position.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Union

from . import algebra
from .algebra import CubicInt, RingParams

SYSTEMS = ("R", "G")

_DIGIT_CHARS = "0123456789abcdefghijklmnopqrstuvwxyz"


def check_system(system: str) -> str:
    if system not in SYSTEMS:
        raise ValueError(f"system must be 'R' or 'G', got {system!r}")
    return system


# ---------------------------------------------------------------------------
# integer sequences
# ---------------------------------------------------------------------------

def _grow(seq: list[int], n: int, a: int) -> None:
    while len(seq) <= n:
        v = a * seq[-1] - seq[-2] + seq[-3]
        if abs(v) > algebra.COEFF_LIMIT:
            raise OverflowError(f"sequence term {len(seq)} exceeds the coefficient range")
        seq.append(v)


@lru_cache(maxsize=None)
def _seq_store(a: int, kind: str) -> list[int]:
    algebra._check_a(a)
    if kind == "R":
        return [1, a, a * a]
    if kind == "G":
        return [1, a, a * a - 1]
    if kind == "G'":
        return [0, 0, 1]
    raise ValueError(kind)


def _term(a: int, n: int, kind: str) -> int:
    if n < 0:
        raise ValueError(f"index must be >= 0, got {n}")
    seq = _seq_store(a, kind)
    _grow(seq, n, a)
    return seq[n]


def seq_R(a: int, n: int) -> int:
    """R_0 = 1, R_1 = a, R_2 = a^2, R_{n+3} = a R_{n+2} - R_{n+1} + R_n."""
    return _term(a, n, "R")


def seq_G(a: int, n: int) -> int:
    """G_0 = 1, G_1 = a, G_2 = a^2 - 1, same recurrence as R."""
    return _term(a, n, "G")


def seq_G_shifted(a: int, n: int) -> int:
    """G'_0 = G'_1 = 0, G'_2 = 1; G_n = G'_{n+2}."""
    return _term(a, n, "G'")


def seq_R_shifted(a: int, n: int) -> int:
    """R'_0 = R'_1 = 0 and R'_n = R_{n-2} for n >= 2."""
    if n < 0:
        raise ValueError(f"index must be >= 0, got {n}")
    return 0 if n < 2 else seq_R(a, n - 2)


def basis(a: int, system: str, n: int) -> int:
    return seq_R(a, n) if check_system(system) == "R" else seq_G(a, n)


# ---------------------------------------------------------------------------
# words
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DigitWord:
    """Finite word, most-significant digit first; ``offset`` is the index of
    the last digit.  Leading zeros are stripped, the empty word is zero."""

    digits: tuple[int, ...] = ()
    offset: int = 0

    def __post_init__(self):
        d = tuple(int(x) for x in self.digits)
        k = 0
        while k < len(d) and d[k] == 0:
            k += 1
        d = d[k:]
        if any(x < 0 for x in d):
            raise ValueError("digits must be non-negative")
        object.__setattr__(self, "digits", d)
        if not d:
            object.__setattr__(self, "offset", 0)

    @property
    def top(self) -> int:
        """Index of the most significant digit (offset - 1 when empty)."""
        return self.offset + len(self.digits) - 1

    def at(self, i: int) -> int:
        j = self.top - i
        if 0 <= j < len(self.digits):
            return self.digits[j]
        return 0

    def ascending(self) -> list[int]:
        """Digits from index ``offset`` upwards."""
        return list(reversed(self.digits))

    def __len__(self) -> int:
        return len(self.digits)

    def __str__(self) -> str:
        if not self.digits:
            return ""
        return _digits_to_text(self.digits) + f"@{self.offset}"


@dataclass(frozen=True)
class EventuallyPeriodicWord:
    """Infinite word: ``preamble`` (msd first, kept at full length) at indices
    ``offset .. offset+len(preamble)-1`` followed by ``cycle`` repeated
    forever towards higher indices.  ``cycle`` is stored in increasing index
    order; the text form writes one period most-significant first."""

    preamble: tuple[int, ...]
    cycle: tuple[int, ...]
    offset: int = 0

    def __post_init__(self):
        pre = tuple(int(x) for x in self.preamble)
        cyc = tuple(int(x) for x in self.cycle)
        if not cyc:
            raise ValueError("cycle must be non-empty")
        cyc = _primitive(cyc)
        off = self.offset
        # absorb preamble digits that continue the cycle backwards
        while pre and pre[0] == cyc[-1]:
            cyc = (cyc[-1],) + cyc[:-1]
            pre = pre[1:]
        object.__setattr__(self, "preamble", pre)
        object.__setattr__(self, "cycle", cyc)
        object.__setattr__(self, "offset", off)

    @property
    def cycle_start(self) -> int:
        return self.offset + len(self.preamble)

    def at(self, i: int) -> int:
        if i < self.offset:
            return 0
        if i < self.cycle_start:
            return self.preamble[len(self.preamble) - 1 - (i - self.offset)]
        return self.cycle[(i - self.cycle_start) % len(self.cycle)]

    def truncate(self, top: int) -> DigitWord:
        """Finite word made of the digits at indices offset..top."""
        if top < self.offset:
            return DigitWord()
        asc = [self.at(i) for i in range(self.offset, top + 1)]
        return DigitWord(tuple(reversed(asc)), self.offset)

    def __str__(self) -> str:
        pre = _digits_to_text(self.preamble)
        cyc = _digits_to_text(tuple(reversed(self.cycle)))
        return f"{pre}({cyc})*@{self.offset}"


Word = Union[DigitWord, EventuallyPeriodicWord]


def _primitive(cyc: tuple[int, ...]) -> tuple[int, ...]:
    n = len(cyc)
    for p in range(1, n + 1):
        if n % p == 0 and cyc == cyc[:p] * (n // p):
            return cyc[:p]
    return cyc


def _digits_to_text(digits: Sequence[int]) -> str:
    try:
        return "".join(_DIGIT_CHARS[d] for d in digits)
    except IndexError:
        raise ValueError("digit too large for the text format (max 35)") from None


_WORD_RE = re.compile(r"^([0-9a-z]*)(?:\(([0-9a-z]+)\)\*)?@(-?\d+)$")


def parse_word(text: str) -> Word:
    """Inverse of ``str(word)``; the empty string is the empty word."""
    text = text.strip()
    if text == "":
        return DigitWord()
    m = _WORD_RE.match(text)
    if not m:
        raise ValueError(f"malformed word {text!r}")
    pre = tuple(_DIGIT_CHARS.index(c) for c in m.group(1))
    offset = int(m.group(3))
    if m.group(2) is None:
        if pre and pre[0] == 0:
            raise ValueError(f"non-canonical word {text!r} (leading zero)")
        return DigitWord(pre, offset)
    cyc_msd = tuple(_DIGIT_CHARS.index(c) for c in m.group(2))
    return EventuallyPeriodicWord(pre, tuple(reversed(cyc_msd)), offset)


# ---------------------------------------------------------------------------
# admissibility
# ---------------------------------------------------------------------------

def _window_ok(w: tuple[int, int, int, int], a: int) -> bool:
    return w < (a - 1, a - 1, 0, 1)


def admissible_ascending(asc: Sequence[int], a: int, system: str) -> bool:
    """Window predicate on digits listed from the low end upwards."""
    for d in asc:
        if d < 0 or d >= a:
            raise ValueError(f"digit {d} outside 0..{a - 1}")
    padded = [0, 0, 0] + list(asc)
    for i in range(3, len(padded)):
        if not _window_ok((padded[i], padded[i - 1], padded[i - 2], padded[i - 3]), a):
            return False
    if system == "G":
        e = list(asc[:3]) + [0] * (3 - min(3, len(asc)))
        if not e[0] < a:
            return False
        if not (e[1], e[0]) < (a - 1, a - 1):
            return False
        if not (e[2], e[1], e[0]) < (a - 1, a - 1, 0):
            return False
    return True


def is_admissible(word: Word, a: int, system: str = "R") -> bool:
    """True iff the word lies in E(R) (resp. satisfies the G conditions)."""
    check_system(system)
    if isinstance(word, DigitWord):
        return admissible_ascending(word.ascending(), a, system)
    if all(d == 0 for d in word.cycle):
        return admissible_ascending(list(reversed(word.preamble)), a, system)
    # the window has length 4, so enough copies of the cycle cover every
    # distinct window of the infinite word
    reps = max(2, -(-4 // len(word.cycle)) + 1)
    asc = list(reversed(word.preamble)) + list(word.cycle) * reps
    return admissible_ascending(asc, a, system)


class AdmissibilityDFA:
    """Deterministic automaton reading digits from the low end upwards and
    accepting exactly the admissible prefixes.

    A state remembers whether the last digit is a-1, whether the last one
    or two digits are zero, whether the two digits before the last are both
    zero, and (for system G) how many digits have been read, capped at 3.
    ``trans[s][d]`` is the next state id or -1 if ``d`` is forbidden.
    """

    def __init__(self, a: int, system: str = "R"):
        algebra._check_a(a)
        self.a = a
        self.system = check_system(system)
        start = (False, True, True, True, 0 if system == "G" else 3)
        ids = {start: 0}
        order = [start]
        trans: list[list[int]] = []
        i = 0
        while i < len(order):
            st = order[i]
            row = []
            for d in range(a):
                nxt = self._step(st, d)
                if nxt is None:
                    row.append(-1)
                    continue
                if nxt not in ids:
                    ids[nxt] = len(order)
                    order.append(nxt)
                row.append(ids[nxt])
            trans.append(row)
            i += 1
        self.states = order
        self.trans = trans
        self.start = 0

    def _step(self, st, d):
        t1, z1, z12, z23, n = st
        top = d == self.a - 1
        zero = d == 0
        if top and t1 and not z23:
            return None
        if self.system == "G" and n in (1, 2) and top and t1:
            return None
        return (top, zero, zero and z1, z12, min(n + 1, 3))

    def __len__(self) -> int:
        return len(self.states)

    def accepts(self, asc: Sequence[int]) -> bool:
        s = self.start
        for d in asc:
            s = self.trans[s][d]
            if s < 0:
                return False
        return True


@lru_cache(maxsize=None)
def dfa(a: int, system: str) -> AdmissibilityDFA:
    return AdmissibilityDFA(a, system)


# ---------------------------------------------------------------------------
# expansions
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _basis_upto(a: int, system: str, n: int) -> tuple[int, ...]:
    out = []
    k = 0
    while True:
        b = basis(a, system, k)
        if b > n:
            break
        out.append(b)
        k += 1
    return tuple(out)


def greedy_expand(a: int, n: int, system: str = "R") -> DigitWord:
    """Greedy expansion of a natural number in the R or G basis."""
    algebra._check_a(a)
    check_system(system)
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n == 0:
        return DigitWord()
    # cache on the bit length to keep the lru small
    bas = _basis_upto(a, system, 1 << n.bit_length())
    k = len(bas) - 1
    while bas[k] > n:
        k -= 1
    digits = []
    rem = n
    for j in range(k, -1, -1):
        d, rem = divmod(rem, bas[j])
        if d >= a:
            raise ArithmeticError(f"greedy digit {d} >= a at index {j}")
        digits.append(d)
    return DigitWord(tuple(digits), 0)


def word_value(word: DigitWord, a: int, system: str = "R") -> int:
    """Integer value sum d_i * basis_i (offset must be >= 0)."""
    if word.digits and word.offset < 0:
        raise ValueError("integer value needs a non-negative offset")
    return sum(d * basis(a, system, word.offset + j) for j, d in enumerate(word.ascending()))


def word_to_cubic(word: DigitWord, a: int) -> CubicInt:
    """Exact value sum d_i alpha^i in Z[alpha]."""
    acc = algebra.ZERO
    if not word.digits:
        return acc
    p = algebra.alpha_pow(word.offset, a)
    for d in word.ascending():
        if d:
            acc = algebra.add(acc, algebra.scale(p, d))
        p = algebra.alpha_mul(p, a)
    return acc


def eval_word(word: Word, ring: RingParams, root: str = "alpha") -> complex:
    """sum d_i r^i at r = alpha or beta; periodic tails are summed in closed form."""
    if root == "alpha":
        r = ring.alpha
    elif root == "beta":
        r = ring.beta
    else:
        raise ValueError(f"root must be 'alpha' or 'beta', got {root!r}")
    if isinstance(word, DigitWord):
        return _poly_eval(word.ascending(), word.offset, r)
    total = _poly_eval(list(reversed(word.preamble)), word.offset, r)
    if all(d == 0 for d in word.cycle):
        return total
    if root == "beta":
        raise ValueError("an infinite word diverges at beta")
    period = _poly_eval(list(word.cycle), word.cycle_start, r)
    return total + period / (1 - r ** len(word.cycle))


def _poly_eval(asc: Sequence[int], offset: int, r):
    acc = 0
    for d in reversed(asc):
        acc = acc * r + d
    return acc * r**offset if asc else 0


def g_coordinates(word: DigitWord, a: int) -> tuple[int, int, int]:
    """(n, r(n), s(n)) with sum e_i beta^i = n beta^2 + r(n) beta + s(n)
    for a word living at indices >= 2."""
    if word.digits and word.offset < 2:
        raise ValueError("word must live at indices >= 2")
    n = r = s = 0
    for j, d in enumerate(word.ascending()):
        i = word.offset + j
        g = seq_G_shifted
        n += d * g(a, i)
        r += d * (g(a, i - 2) - g(a, i - 1))
        s += d * g(a, i - 1)
    return n, r, s


def power_identity_check(a: int, n: int) -> bool:
    """x^n = G'_n x^2 + (G'_{n-2} - G'_{n-1}) x + G'_{n-1} in Z[x]/(p), and
    alpha^n = R'_n alpha^2 - G'_{n-2}(alpha^2 - alpha) - G'_{n-1}(alpha - 1)."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    p = algebra.ONE
    for _ in range(n):
        p = algebra.cubic_mul(p, algebra.ALPHA, a)
    g = seq_G_shifted
    expected_g = CubicInt(g(a, n - 1), g(a, n - 2) - g(a, n - 1), g(a, n))
    rr = algebra.scale(algebra.ALPHA2, seq_R_shifted(a, n))
    rr = algebra.sub(rr, algebra.scale(CubicInt(0, -1, 1), g(a, n - 2)))
    rr = algebra.sub(rr, algebra.scale(CubicInt(-1, 1, 0), g(a, n - 1)))
    return p == expected_g and p == rr
