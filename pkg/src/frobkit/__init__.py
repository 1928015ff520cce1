"""Relative Frobenius maps, F-finiteness certificates and purity checks over F_p."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BudgetExceeded,
    ContextMismatch,
    ExponentOverflow,
    FrobkitError,
    IllFormedMap,
    InvalidContext,
    InvalidModulus,
    InvalidTwist,
    NotAHomomorphism,
    ParseError,
)
from .field_poly import GREVLEX, LEX, BlockOrder, Context, FpElem, Monomial, Poly  # noqa: E402
from .groebner import (  # noqa: E402
    FinitenessCertificate,
    FinitenessVerdict,
    GroebnerBasis,
    Ideal,
    eliminate,
    groebner_basis,
    ideal_equal,
    module_finiteness,
    normal_form,
)
from .algebra import (  # noqa: E402
    AlgebraMap,
    PresentedAlgebra,
    compose_maps,
    direct_product,
    localize_principal,
    make_algebra,
    make_map,
    polynomial_extension,
    quotient_algebra,
    structure_map,
    tensor_product,
)
from .frobenius import (  # noqa: E402
    PurityOutcome,
    PushoutData,
    base_change_certificate,
    bracket_power,
    certify_f_finite,
    check_naturality,
    kappa_factorization,
    purity_witness,
    radu_andre_pushout,
    relative_frobenius,
    validate_certificate,
)
