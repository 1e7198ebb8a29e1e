"""Exact symbolic engine for momentum-deformed phase spaces.

Everything is computed in Q(i)[params][[momenta]] with explicit
truncation orders, so every verified identity is exact rational
arithmetic through the stated degree.
"""
from .borel import (
    BorelElement,
    borel_exp,
    cocycle_check_borel,
    jordanian_borel_exponent,
    jordanian_borel_twist,
)
from .coalgebra import (
    CoproductSeries,
    coassociativity_check,
    combinatorial_identity_check,
    coproduct,
    coproduct_conjugation_check,
    counit_check,
    invert_twist,
    jordanian_twist_pair,
    left_algebroid_twist_pair,
    lightlike_drinfeld_twist_pair,
    linear_algebroid_twist_pair,
    twist_consistency_check,
    twist_exp_form,
    twist_normal_ordered,
)
from .errors import (
    CompositionError,
    DecompositionError,
    ExprLoweringError,
    ExprSyntaxError,
    IncompatibleSeriesError,
    ModelConfigError,
    NCPhaseError,
    ReversionError,
    XDegreeCapError,
)
from .exprlang import ExprContext, lower, parse, to_text
from .modelfile import ModelConfig, build_realization, load_model, parse_model_text
from .operators import Operator, commutator, operator_exp, operator_inverse
from .params import ParamPoly, ParamTable
from .qdeform import (
    QDeformation,
    momentum_relation_check,
    q_coproduct_check,
    q_relation_check,
    q_star,
    q_star_action_check,
    q_star_associativity_check,
    q_star_monomial,
    q_twist_cocycle_check,
    quadratic_commutator_check,
    quadratic_first_order,
    y_partner_check,
)
from .realizations import (
    CATALOG_NAMES,
    LinearRealization,
    Realization,
    catalog_get,
    closure_check,
    coordinate_operators,
    deformed_commutators,
    jacobi_check,
    lie_closure_check,
)
from .reports import CheckResult, Discrepancy, render_json, render_text
from .scalars import GaussScalar, I, ONE, ZERO, scalar
from .series import (
    DEFAULT_ORDER,
    INF,
    MomentumSeries,
    Space,
    compose,
    dot,
    expand_fn,
    identity_vector,
    revert,
    variable,
)
from .star import (
    CompositionLaw,
    XPolynomial,
    associativity_check,
    closed_form_linear,
    composition_law,
    flow_residual,
    solve_plane_wave_flow,
    star_monomial,
    star_polys,
    x_monomial,
)

__version__ = "0.1.0"
