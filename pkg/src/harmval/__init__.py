"""Numerical checks of univalence and bounded-valence criteria for planar
harmonic maps f = h + conj(g) of the unit disk."""

from .cover import CoverFamily, derivative_growth_check, verify_cover
from .criteria import Criterion, Verdict, check, check_all, validate_prediction
from .errors import HarmvalError
from .expr import AnalyticExpr, Jet3, Z, automorphism, compose, eval_jet, koebe, mobius, parse, to_text
from .harmonic import HarmonicMap, dilatation_jet, eval_point, from_spec, make_harmonic
from .operators import (
    OperatorValues,
    analytic_operators,
    chain_rule_residual,
    compose_map,
    harmonic_operators,
    weighted_quantity,
)
from .sampling import SamplingConfig, limsup_estimate, radial_profile, sup_norm
from .valence import ValenceReport, valence_sweep, winding_number

__version__ = "0.1.0"

__all__ = [
    "AnalyticExpr", "CoverFamily", "Criterion", "HarmonicMap", "HarmvalError", "Jet3",
    "OperatorValues", "SamplingConfig", "ValenceReport", "Verdict", "Z",
    "analytic_operators", "automorphism", "chain_rule_residual", "check", "check_all",
    "compose", "compose_map", "derivative_growth_check", "dilatation_jet", "eval_jet",
    "eval_point", "from_spec", "harmonic_operators", "koebe", "limsup_estimate",
    "make_harmonic", "mobius", "parse", "radial_profile", "sup_norm", "to_text",
    "validate_prediction", "valence_sweep", "verify_cover", "weighted_quantity",
    "winding_number",
]
