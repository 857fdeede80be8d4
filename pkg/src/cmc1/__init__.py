"""Constant mean curvature one surfaces in hyperbolic space from a holomorphic
function ``f(tau)``, with two independent constructions and a numerical verifier."""

from .bianchi import bianchi_calo_point, bicalo_grid, bicalo_via_congruence
from .congruence import (
    CongruenceSample,
    beltrami_angles,
    calo_congruence_sample,
    calo_pair,
    envelope,
)
from .errors import (
    BoundaryNode,
    Cmc1Error,
    DegenerateChart,
    DomainError,
    EmptyGrid,
    InvalidMatrix,
    NoRealEnvelope,
    ParseError,
    VerticalEscape,
    ZeroDerivative,
)
from .expr import eval_jet, evaluate, parse, to_source
from .grid import Domain, HalfSpacePoint, SurfaceGrid, degeneracy_classify
from .jets import Jet2
from .small import NullCurveMatrix, small_grid, small_matrix, small_point, to_upper_half_space
from .verify import Tolerances, VerificationReport, route_deviation, verify_grid

__version__ = "0.1.0"

__all__ = [
    "BoundaryNode", "Cmc1Error", "CongruenceSample", "DegenerateChart", "Domain",
    "DomainError", "EmptyGrid", "HalfSpacePoint", "InvalidMatrix", "Jet2",
    "NoRealEnvelope", "NullCurveMatrix", "ParseError", "SurfaceGrid", "Tolerances",
    "VerificationReport", "VerticalEscape", "ZeroDerivative", "beltrami_angles",
    "bianchi_calo_point", "bicalo_grid", "bicalo_via_congruence", "calo_congruence_sample",
    "calo_pair", "degeneracy_classify", "envelope", "eval_jet", "evaluate", "parse",
    "route_deviation", "small_grid", "small_matrix", "small_point", "to_source",
    "to_upper_half_space", "verify_grid",
]
