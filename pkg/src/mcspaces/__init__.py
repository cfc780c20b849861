"""Exact rational workbench for filtered L-infinity and dg Lie algebras.

Structure verification, Maurer-Cartan elements and twisting, the gauge
group with its homotopy correspondence, simplicial Maurer-Cartan sets,
Goldman-Millson style invariance checks, tangent complexes of the gauge
quotient, and the Hochschild deformation complex of a finite-dimensional
associative algebra.  All arithmetic is over Q via fractions.Fraction;
every verdict is exact.
"""

from .exactlin import (
    CohomologyResult,
    GradedSpace,
    LinearMap,
    NotAComplexError,
    StructuralError,
    cohomology,
    format_vector,
    quotient_basis,
    solve_linear,
)
from .linf import (
    BracketTable,
    LInftyAlgebra,
    eval_bracket,
    eval_bracket_basis,
    jacobi_residual,
    koszul_sign,
    make_algebra,
    verify_structure,
)
from .chevalley import chevalley_eilenberg
from .filtered import (
    CoefficientAlgebra,
    check_filtration,
    dual_numbers,
    extend_scalars,
    fat_point_uv,
    nilpotency_index,
    polynomial_truncation,
    truncate,
)
from .mc import (
    MCElement,
    NotMaurerCartanError,
    TwistedAlgebra,
    lift_deformation,
    mc_element,
    mc_polynomial_system,
    mc_residual,
    twist,
)
from .gauge import (
    Homotopy,
    bch,
    gauge_act,
    gauge_from_homotopy,
    homotopy_faces,
    homotopy_from_gauge,
    moduli_set,
)
from .simplicial import (
    MCSimplex,
    faces_degeneracies,
    fibration_consequence_check,
    mc_simplex,
    mc_simplex_verify,
    omega,
    pi0,
)
from .morphisms import (
    FilteredMorphism,
    goldman_millson_check,
    morphism,
    stagewise_quasi_iso,
    twist_pushforward_check,
    verify_morphism,
)
from .tangent import tangent_complex, tangent_mc, tangent_report
from .hochschild import (
    FiniteAlgebraData,
    build_convolution,
    deformation_pipeline,
    structure_as_mc,
)

__version__ = "0.1.0"
