"""Exact interval arithmetic, Groebner bases, comprehensive and interval Groebner systems."""

from .apps import (
    DivisibilityReport,
    RootSet,
    epsilon_divides,
    fuzzy_solve,
    i_divides,
    solve_univariate,
)
from .cgs import Branch, CGSResult, is_consistent, md_basis, pgb, pgb_main
from .groebner import (
    GroebnerBasis,
    eliminate,
    ideal_member,
    is_groebner,
    normal_form,
    radical_member,
    reduced_gb,
    s_polynomial,
)
from .igs import (
    Box,
    ConsistencyVerdict,
    IGSResult,
    IntervalSystem,
    ParametricSystem,
    Status,
    augment,
    igs,
    igs_parametric,
    interval_is_consistent,
    parameterize,
    real_root_in_box,
)
from .interval import INF, NEG_INF, Interval, IntervalError, IntervalUnion, arith, power, recip
from .parse import ParseError, parse_expression, parse_problem, render_problem
from .poly import (
    BlockOrder,
    GrevLex,
    IntervalPolynomial,
    Lex,
    ParamPolynomial,
    Polynomial,
    PolynomialError,
    cmp_monomials,
    family_member,
    make_order,
)

__version__ = "0.1.0"
