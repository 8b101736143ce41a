"""affinefock: exact free field realizations of affine Kac-Moody algebras.

The package realizes the induced modules attached to a parabolic subalgebra
of sl(n+1) as polynomial Fock spaces tensored with an inducing module, builds
the image of every affine generator as a finite normal-ordered operator, and
verifies the bracket relations by exact computation on states.
"""

from .fock import (
    FockState,
    apply_annihilation,
    apply_creation,
    h_weight,
    pbw_degree,
    state_from_text,
    state_to_text,
    total_mode,
)
from .formal_dist import (
    DeltaKernel,
    LaurentPoly,
    annihilation_check,
    delta_identity_suite,
    multiply_by_field,
    residue_pair,
)
from .inducing import (
    axiom_check,
    character_module,
    evaluation_module,
    heisenberg_fock,
    natural_block_rep,
)
from .lie import (
    LieElement,
    LoopElement,
    ParabolicData,
    Root,
    bracket,
    build_sl,
    cartan_h,
    diag_element,
    form,
    killing_form,
    loop,
    loop_bracket,
    loop_central,
    matrix_unit,
    parabolic_decompose,
)
from .realization import (
    CENTRAL,
    NormalOrderedOperator,
    Realization,
    bernoulli,
    bracket_sweep,
    build_operator_explicit_sl,
    build_operator_general,
    series_expand,
)
from .sampling import Sampler

__all__ = [
    "CENTRAL",
    "DeltaKernel",
    "FockState",
    "LaurentPoly",
    "LieElement",
    "LoopElement",
    "NormalOrderedOperator",
    "ParabolicData",
    "Realization",
    "Root",
    "Sampler",
    "annihilation_check",
    "apply_annihilation",
    "apply_creation",
    "axiom_check",
    "bernoulli",
    "bracket",
    "bracket_sweep",
    "build_operator_explicit_sl",
    "build_operator_general",
    "build_sl",
    "cartan_h",
    "character_module",
    "delta_identity_suite",
    "diag_element",
    "evaluation_module",
    "form",
    "h_weight",
    "heisenberg_fock",
    "killing_form",
    "loop",
    "loop_bracket",
    "loop_central",
    "matrix_unit",
    "multiply_by_field",
    "natural_block_rep",
    "parabolic_decompose",
    "pbw_degree",
    "residue_pair",
    "series_expand",
    "state_from_text",
    "state_to_text",
    "total_mode",
]
