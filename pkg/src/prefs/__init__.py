"""Exact-rational engine for incomplete preferences over horse lotteries."""

from .model import (
    Assessment,
    Direction,
    IncoherentAssessment,
    Lottery,
    Preference,
    PrefsError,
    ProbUtilityPair,
    SdeuFunction,
    Space,
    parse_rat,
    format_rat,
)
from .algebra import (
    ChanceExpr,
    ConstExpr,
    EventExpr,
    GivenExpr,
    MatrixExpr,
    MixExpr,
    chance,
    mix,
    eval_expr,
)
from .representation import (
    Bounds,
    DualSet,
    MODE_A5,
    MODE_A6,
    basis_from_credal,
    build_dual,
    conditional_eu_bounds,
    entails,
    eu_bounds,
    is_coherent,
    prob_bounds,
)
from .stateindep import (
    NoAgreeingPair,
    PairBounds,
    a6_propagate,
    find_agreeing_pair,
    find_cond_constants,
    pair_eu_bounds,
)
from .a6star import (
    ClosureState,
    IncoherentClosure,
    PreclusionVerdict,
    a6star_round,
    is_precluded,
    iterate_closure,
    new_closure,
    theorem4_eu_bounds,
)

__version__ = "0.1.0"
