"""Triple-patterning-aware grid routing.

Routes multi-pin nets on a 3-D track grid while deciding mask (color)
assignment during the path search itself, inserting stitches only where
they beat a conflict. Ships with a route-then-decompose baseline and a
brute-force oracle for desk-scale verification.
"""

from .color_state import Color
from .layout import DesignRules, Layout, load_layout
from .grid import Grid
from .router import route_net
from .negotiation import detect_conflicts, route_all
from .metrics import compare, score

__version__ = "0.1.0"

__all__ = [
    "Color",
    "DesignRules",
    "Grid",
    "Layout",
    "compare",
    "detect_conflicts",
    "load_layout",
    "route_all",
    "route_net",
    "score",
]
