"""Area generating function of simple-2-column polyominoes on the hexagonal lattice.

Three independent routes to the same exact power series:

* :func:`g_closed` evaluates the closed NUM/DEN form built from twelve q-series;
* :func:`g_temperley` solves the functional equation, either by fixed-point
  iteration or as a 3x3 linear system over truncated series;
* :func:`count_series` counts polyhexes by brute force.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .closed_form import GreekSet, g_closed, klarner, num_den
from .errors import PolyhexGFError
from .oracle import count_series
from .series import QSeries, TSeries, WPoly
from .temperley import g_temperley

__all__ = [
    "GreekSet",
    "PolyhexGFError",
    "QSeries",
    "TSeries",
    "WPoly",
    "count_series",
    "g_closed",
    "g_temperley",
    "klarner",
    "num_den",
]
