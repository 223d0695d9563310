"""Cubic Rauzy fractals for the family x^3 - a x^2 + x - 1, a >= 2."""
from .algebra import CubicInt, ring_new
from .automaton import build_boundary_automaton, neighbor_set, states_match_explicit
from .numeration import DigitWord, EventuallyPeriodicWord, greedy_expand, is_admissible

__all__ = [
    "CubicInt",
    "DigitWord",
    "EventuallyPeriodicWord",
    "build_boundary_automaton",
    "greedy_expand",
    "is_admissible",
    "neighbor_set",
    "ring_new",
    "states_match_explicit",
]

__version__ = "0.1.0"
