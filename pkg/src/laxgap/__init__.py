"""Discrete eigenvalues in the spectral gap of the 1d Dirac (Lax) operator
with non-vanishing bounded potentials.

The operator [[i d/dx, -iq], [i q_bar, -i d/dx]] with |q| -> 1 at infinity
has essential spectrum (-inf, -1] U [1, inf); this package locates its point
spectrum inside the gap (-1, 1) three independent ways — a fixed-point
pipeline through a scalar eigenvalue pencil (valid when one Riemann
invariant of the potential is constant), direct banded discretizations of
both the first-order system and its unitarily reduced diagonal-potential
form, and unconditional exclusion bounds — and cross-validates them against
closed-form references.
"""

from .bounds import BoundCertificate, check_eigenvalues, default_c_grid, evaluate_bounds
from .discretize import ScalarProblem, laplacian_plus_beta, sturm_liouville_lambda_form
from .eigensolve import (
    GenEigProblem,
    SymTridiag,
    eig_interval,
    gen_negative_eigs,
    hermitian_band_eig_interval,
    sturm_count,
)
from .gap import GapEigenpair, gap_eigenvalues, gap_report, reconstruct_spinor, solve_beta_j
from .kbeta import (
    KBetaSpectrum,
    NZeroReport,
    kbeta_spectrum,
    mu_curve,
    n_zero_set,
    write_sweep_csv,
)
from .oracle import SquareWellRoots, dark_soliton_lambda, square_well_kappa, square_well_mu
from .potential import (
    Branch,
    DarkSoliton,
    Grid,
    PiecewiseConstantQ,
    RiemannFields,
    Sampled,
    Segment,
    SquareWell,
    aligned_grid,
    gap_potential_V,
    mirrored_gap_potential,
    part_norms,
    phase_profile,
    potential_from_json,
    potential_to_json,
    riemann_invariants,
)
from .transform import (
    GapMode,
    OperatorMatrix,
    SpinorField,
    apply_m,
    assemble_L,
    assemble_calL,
    filtered_gap_spectrum,
    m_matrix_at,
)

__version__ = "0.1.0"

__all__ = [
    "Branch",
    "BoundCertificate",
    "DarkSoliton",
    "GapEigenpair",
    "GapMode",
    "GenEigProblem",
    "Grid",
    "KBetaSpectrum",
    "NZeroReport",
    "OperatorMatrix",
    "PiecewiseConstantQ",
    "RiemannFields",
    "Sampled",
    "ScalarProblem",
    "Segment",
    "SpinorField",
    "SquareWell",
    "SquareWellRoots",
    "SymTridiag",
    "aligned_grid",
    "apply_m",
    "assemble_L",
    "assemble_calL",
    "check_eigenvalues",
    "dark_soliton_lambda",
    "default_c_grid",
    "eig_interval",
    "evaluate_bounds",
    "filtered_gap_spectrum",
    "gap_eigenvalues",
    "gap_potential_V",
    "gap_report",
    "gen_negative_eigs",
    "hermitian_band_eig_interval",
    "kbeta_spectrum",
    "laplacian_plus_beta",
    "m_matrix_at",
    "mirrored_gap_potential",
    "mu_curve",
    "n_zero_set",
    "part_norms",
    "phase_profile",
    "potential_from_json",
    "potential_to_json",
    "reconstruct_spinor",
    "riemann_invariants",
    "solve_beta_j",
    "square_well_kappa",
    "square_well_mu",
    "sturm_count",
    "sturm_liouville_lambda_form",
    "write_sweep_csv",
]
