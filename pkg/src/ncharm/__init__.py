"""ncharm: exact computer algebra for polynomials in free symmetric variables.

The package computes directional derivatives and Laplacians of polynomials
over the free algebra on symmetric variables, exact harmonic bases in any
number of variables, border-vector / middle-matrix representations, and
classification of homogeneous harmonic and subharmonic polynomials in two
variables, backed by reproducible numeric positivity sampling.
"""

from .ncpoly import (
    H_LETTER,
    MatrixPoint,
    ParseError,
    Poly,
    Word,
    degree_profile,
    evaluate,
    parse,
    render_word,
    symmetrize,
    word,
)
from .calculus import (
    CommPoly,
    commutative_collapse,
    commutative_laplacian,
    directional_derivative,
    laplacian,
)
from .harmonicspace import (
    HarmonicBasis,
    check_independence_property,
    enumerate_words,
    express_in_basis,
    gamma_power_parts,
    harmonic_basis,
    laplacian_coefficient_matrix,
)
from .middlematrix import (
    MiddleMatrixRep,
    evaluate_middle,
    extract,
    reconstruct,
    zeroes_violation,
)
from .positivity import (
    PointVerdict,
    SampleConfig,
    SampleVerdict,
    Witness,
    ldl_pivots,
    min_eigenvalue,
    sample_matrix_positive,
    subharmonic_at_point,
)
from .classify2 import (
    Degree4Coeffs,
    Degree4Region,
    GramForm,
    GramObstruction,
    NeighborDecomposition,
    OddSandwich,
    SosDecomposition,
    Verdict,
    classify,
    degree4_coefficients,
    degree4_family,
    degree4_inequalities,
    gram_from_neighbors,
    high_even_membership,
    laplacian_sos_identity_check,
    left_neighbor,
    neighbor_harmonicity_check,
    odd_sandwich,
    odd_sandwich_vanishing_check,
    right_neighbor,
    sos_decompose,
)

__version__ = "0.1.0"
