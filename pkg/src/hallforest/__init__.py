"""Hall algebras of rooted forests and Feynman graphs, with their actions."""
from .hall import (DELTA, GRAPHS, PHI, TREES, HallElement, HallError, antipode, bracket,
                   coproduct, counit, delta, format_element, hall_bracket, hall_product, kappa,
                   phi, prelie, prelie_bracket)
from .parsing import ParseError, parse
from .representations import RepKind, act
from .verify import run_suite

__version__ = "0.1.0"

__all__ = [
    "DELTA", "PHI", "TREES", "GRAPHS", "HallElement", "HallError", "ParseError", "RepKind",
    "act", "antipode", "bracket", "coproduct", "counit", "delta", "format_element",
    "hall_bracket", "hall_product", "kappa", "parse", "phi", "prelie", "prelie_bracket",
    "run_suite",
]
