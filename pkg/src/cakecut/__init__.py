"""Exact knife-only constructions on round cakes."""

from .constructions import (
    Construction,
    Cut,
    bisect_cake,
    chain_traverse,
    divide,
    find_center,
    quarter_cuts,
    sixth_cuts,
    steiner_midpoint,
    steiner_parallel,
    third_cuts,
)
from .exactnum import CR, ConstructibleReal, sqrt
from .geometry import Circle, Dilation, Line, Point, compose_dilations, join, meet
from .scene import Scene, build_kissing_chain, build_single_cake
from .trace import Trace
from .verify import VerificationReport, audit_trace, equal_sectors, is_diameter

__version__ = "0.1.0"
