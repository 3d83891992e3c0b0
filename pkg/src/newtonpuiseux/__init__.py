"""Newton polygons and Puiseux expansions for first order differential and q-difference equations."""
from __future__ import annotations

from .analysis import StepRecord, Trace, audit, step, trace
from .bounds import (
    BoundReport,
    bound_report,
    corollary_a_rhs,
    foliation_bound_check,
    genus_bound_check,
    improper_check,
    reasonableness,
    theorem_main_rhs,
    theorem_reasonable_rhs,
)
from .corpus import (
    CorpusSpec,
    branch_minimal_polynomial,
    gen_covered_with_solution,
    gen_differential_from_branch,
    gen_random_branch,
)
from .equation import CoveredEquation, nu0, parse_equation
from .operators import OperatorSpec
from .parser import parse_scalar, parse_series
from .polygon import NewtonPolygon, SupportElement, build_polygon, element, height, relative_height
from .scalars import ComplexField, ExactField
from .series import CharacteristicData, PuiseuxPoly, characteristic_data
from .solver import BranchJet, candidate_exponents, expand, verify_solution

__all__ = [
    "BoundReport", "BranchJet", "CharacteristicData", "ComplexField", "CorpusSpec",
    "CoveredEquation", "ExactField", "NewtonPolygon", "OperatorSpec", "PuiseuxPoly",
    "StepRecord", "SupportElement", "Trace", "audit", "bound_report", "branch_minimal_polynomial",
    "build_polygon", "candidate_exponents", "characteristic_data", "corollary_a_rhs", "element",
    "expand", "foliation_bound_check", "gen_covered_with_solution", "gen_differential_from_branch",
    "gen_random_branch", "genus_bound_check", "height", "improper_check", "nu0", "parse_equation",
    "parse_scalar", "parse_series", "reasonableness", "relative_height", "step",
    "theorem_main_rhs", "theorem_reasonable_rhs", "trace", "verify_solution",
]
