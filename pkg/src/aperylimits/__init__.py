"""Exact-arithmetic toolkit for expressing slowly converging constants as
fast Apéry-style limits of recurrence solutions.

The pipeline: describe a binomial-type summand as a proper hypergeometric
term, telescope (or guess) its row-sum recurrence, deform the factorials
into rising products in a formal variable t and check how divisible the
recurrence's right side is by powers of t, run the resulting two-solution
recurrence problem exactly, and identify the limit of the solution ratio
against a dictionary of constants via integer-relation detection.
"""

from .apery import (
    AperyProblem,
    LimitReport,
    RightSide,
    SingularRecurrenceError,
    clearing_lcm_power,
    delta_estimate,
    limit_report,
    operator_compose,
    rec_run,
    rec_run_inhom,
    zeta3_problem,
)
from .divisibility import (
    DivisibilityError,
    DivisibilityReport,
    FamilySpec,
    build_problem,
    find_alpha,
    rhs_jet,
    slow_oracle,
    term_recurrence,
    valuation_check,
)
from .exact import BigFloat, Jet, PolyQ, jet_pochhammer
from .guess import guess_recurrence, rec_residuals
from .hyperterm import (
    Poly2,
    ProperTerm,
    c2_closed_form,
    coeff_c,
    franel,
    row_sum,
    row_sum_jet,
    term_eval,
    term_jet,
)
from .identify import (
    DEFAULT_BASIS,
    ConstantMatch,
    constant,
    identify,
    integer_relation,
)
from .recurrence import Recurrence
from .telescope import (
    Certificate,
    OrderExceededError,
    RationalFunction,
    check_certificate,
    gosper,
    zeilberger,
)

__version__ = "0.1.0"

__all__ = [
    "AperyProblem",
    "BigFloat",
    "Certificate",
    "ConstantMatch",
    "DEFAULT_BASIS",
    "DivisibilityError",
    "DivisibilityReport",
    "Jet",
    "LimitReport",
    "OrderExceededError",
    "Poly2",
    "PolyQ",
    "ProperTerm",
    "RationalFunction",
    "Recurrence",
    "RightSide",
    "SingularRecurrenceError",
    "FamilySpec",
    "build_problem",
    "c2_closed_form",
    "check_certificate",
    "clearing_lcm_power",
    "coeff_c",
    "constant",
    "delta_estimate",
    "find_alpha",
    "franel",
    "gosper",
    "guess_recurrence",
    "identify",
    "integer_relation",
    "jet_pochhammer",
    "limit_report",
    "operator_compose",
    "rec_residuals",
    "rec_run",
    "rec_run_inhom",
    "rhs_jet",
    "row_sum",
    "row_sum_jet",
    "slow_oracle",
    "term_eval",
    "term_jet",
    "term_recurrence",
    "valuation_check",
    "zeilberger",
    "zeta3_problem",
]
