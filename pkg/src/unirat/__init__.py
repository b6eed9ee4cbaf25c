"""Exact computation with unirational fields.

Transcendence and algebraic degrees, minimal polynomials, membership,
separating bases, factorization over algebraic extensions, and lattices of
intermediate fields, over Q or small prime fields.
"""

from .coeffs import QQ, PrimeField, RationalField
from .errors import (
    BudgetExceededError,
    InseparableInputError,
    IntegrityError,
    NotAlgebraicError,
    ParseError,
    SolveError,
    UniratError,
    UniverseMismatchError,
    ZeroDenominatorError,
)
from .fields import (
    AlgExt,
    AlgExtElem,
    AmbientField,
    EPoly,
    ExtPoly,
    FieldPresentation,
    RatFunc,
    algext_arith,
    algext_inverse,
    norm_of,
    ratfunc_normalize,
)
from .groebner import (
    GroebnerBasis,
    Ideal,
    buchberger,
    elimination_ideal,
    ideal_member,
    normal_form,
)
from .poly import (
    Block,
    GrevLex,
    Lex,
    MultiPoly,
    multivar_gcd,
    poly_arith,
    resultant,
    squarefree_decomposition,
    tag_order,
)
from .unirational import (
    INFINITE,
    NOT_MEMBER,
    TRANSCENDENTAL,
    JacobianReport,
    TagBasis,
    algebraic_degree,
    infinite_family_witness,
    is_integral,
    jacobian_trdeg,
    membership_express,
    minimal_polynomial,
    separating_basis,
    tag_basis,
    trdeg_groebner,
    uni_multivariate_decompose,
)

__version__ = "0.1.0"
