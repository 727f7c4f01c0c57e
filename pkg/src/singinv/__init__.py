"""Exact invariants of isolated hypersurface singularities.

The pipeline runs from a defining polynomial f to its moduli algebra
k[z]/(f, df), then to the multiplication tensor of that algebra, and finally
to classical invariants of the resulting form, all over Q(parameters).
"""

from .arith import ParamPoly, RatFunc, format_ratfunc, param_gcd, ratfunc_arith, ratfunc_eval
from .catalog import Catalog, check_syzygy, default_catalog, evaluate_absolute, evaluate_invariant, weight_of
from .errors import (
    CatalogError,
    NonHomogeneousError,
    ShapeError,
    UnboundNameError,
    UnknownIdentifierError,
    VarianceError,
    ConstructionInapplicable,
    InconsistencyError,
    InputError,
    NonIsolatedError,
    NotAnIdealError,
    ParseError,
    PoleError,
    SingInvError,
    UndefinedInvariant,
    UndefinedResult,
)
from .forms import (
    HomogeneousForm,
    Polynomial,
    SymmetricTensor,
    form_to_tensor,
    linear_substitute,
    normalize_scale,
    parse_form,
    parse_polynomial,
    parse_ratfunc,
    proportional,
    tensor_to_form,
)
from .moduli import (
    analyze,
    absolute_invariants_of_singularity,
    filtration,
    flag_multiplication_tensor,
    ideal_from_generators,
    groebner,
    jacobian_ideal,
    multiplication_tensor,
    nilpotency_ideal,
    quotient_algebra,
)
from .tensor import ContractionSpec, Tensor, contract, levi_civita, parse_spec

__all__ = [
    "CatalogError",
    "NonHomogeneousError",
    "ShapeError",
    "UnboundNameError",
    "UnknownIdentifierError",
    "VarianceError",
    "ParamPoly",
    "RatFunc",
    "format_ratfunc",
    "param_gcd",
    "ratfunc_arith",
    "ratfunc_eval",
    "Catalog",
    "check_syzygy",
    "default_catalog",
    "evaluate_absolute",
    "evaluate_invariant",
    "weight_of",
    "ConstructionInapplicable",
    "InconsistencyError",
    "InputError",
    "NonIsolatedError",
    "NotAnIdealError",
    "ParseError",
    "PoleError",
    "SingInvError",
    "UndefinedInvariant",
    "UndefinedResult",
    "HomogeneousForm",
    "Polynomial",
    "SymmetricTensor",
    "form_to_tensor",
    "linear_substitute",
    "normalize_scale",
    "parse_form",
    "parse_polynomial",
    "parse_ratfunc",
    "proportional",
    "tensor_to_form",
    "analyze",
    "absolute_invariants_of_singularity",
    "filtration",
    "flag_multiplication_tensor",
    "ideal_from_generators",
    "groebner",
    "jacobian_ideal",
    "multiplication_tensor",
    "nilpotency_ideal",
    "quotient_algebra",
    "ContractionSpec",
    "Tensor",
    "contract",
    "levi_civita",
    "parse_spec",
]

__version__ = "0.1.0"
