"""Exact local conjugacies of polynomials near infinity, relation certificates and heights."""
from .conjugacy import (
    Classification,
    Kind,
    PsiSeries,
    chebyshev,
    classify,
    common_iterate_search,
    commutes,
    enumerate_psi_choices,
    extract_power_substitution,
    functional_residual,
    solve_psi,
)
from .dependence import (
    Certificate,
    Found,
    NotFoundUpTo,
    PsiTerm,
    Relation,
    SemiconjWitness,
    check_invariance,
    find_relation,
    quadratic_semiconj_search,
    semiconj_verify,
    verify_relation,
    witness_relation,
)
from .errors import DynamicsError, ParseError
from .heights import (
    HeightBreakdown,
    PrecisionReal,
    canonical_height,
    green,
    height_ratio,
    naive_height,
    phi_abs,
)
from .parsing import parse_poly, parse_scalar, parse_series
from .scalars import CyclotomicScalar, RootOfUnity, scalar
from .series import LaurentTail, MdElement, Poly, reversion, series_compose_poly, substitute_md

__all__ = [name for name in dir() if not name.startswith("_")]
