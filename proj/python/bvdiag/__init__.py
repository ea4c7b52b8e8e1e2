"""Ordered Bratteli-Vershik diagrams: exact eigenvalue tests.

Thin wrapper over the C++ core. Report-producing calls return plain dicts
(parsed from the core's canonical JSON), with rational values as strings.
"""

import json as _json

from . import _core
from ._core import Diagram, from_json, odometer, orbit, rational_shortcut, sturmian, telescope, toeplitz

__all__ = [
    "Diagram",
    "sturmian",
    "odometer",
    "toeplitz",
    "telescope",
    "from_json",
    "orbit",
    "rational_shortcut",
    "properness",
    "measures",
    "candidates",
    "test_continuous",
    "test_measurable",
    "test_exact_rank",
    "spoil",
]


def _parsed(text):
    return _json.loads(text)


def properness(diagram):
    return _parsed(_core.properness(diagram))


def measures(diagram, depth):
    return _parsed(_core.measures(diagram, depth))


def candidates(diagram, depth=6, bound=8):
    return _parsed(_core.candidates(diagram, depth, bound))


def test_continuous(diagram, alpha, depth=12):
    return _parsed(_core.test_continuous(diagram, alpha, depth))


def test_measurable(diagram, alpha, grid=10):
    return _parsed(_core.test_measurable(diagram, alpha, grid))


def test_exact_rank(diagram, alpha, depth=10):
    return _parsed(_core.test_exact_rank(diagram, alpha, depth))


def spoil(diagram, targets, levels=2):
    return _parsed(_core.spoil(diagram, targets, levels))
