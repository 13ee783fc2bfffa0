"""Spectral identity checks for mirror-symmetric Jacobi matrices and the
half-line discrete Schrodinger scattering problem."""

__version__ = "0.1.0"

from .continuum import ContinuumSpectra, converging_pairing, delta_spectra, spectral_product_gap
from .eigenproduct import (
    ProductIdentityReport,
    check_exact,
    closed_form_rhs,
    closed_form_rhs_exact,
    cosine_product_residual,
    free_chain_product_residual,
    resultant_exact,
    shifted_sine_product_residual,
    spectral_lhs,
)
from .errors import (
    AdmissibilityError,
    ConvergenceError,
    DegenerateInputError,
    DomainError,
    SpectralAmbiguityError,
)
from .identities import (
    BridgeReport,
    ScatteringIdentityReport,
    band_energy,
    bridge_report,
    contour_identity_residual,
    mirror_potential,
    pv_average_residual,
    pv_identity_residual,
    pv_kernel_residual,
    pv_phase_integral,
    root_product_residual,
    scattering_report,
    solve_quantization,
)
from .scattering import (
    JostPolynomial,
    PhaseFunction,
    Potential,
    delta_of_lambda,
    discrete_spectrum,
    fundamental_solution,
    jost_polynomial,
    phase_function,
    wronskian,
)
from .tridiag import (
    MirrorJacobiSpec,
    Spectrum,
    TridiagMatrix,
    char_poly_exact,
    eigenvalue_count_below,
    eigenvalue_count_below_exact,
    eigenvalues,
    expand,
    fold_even,
    fold_odd,
    parity_signs,
    parity_spectra,
)
