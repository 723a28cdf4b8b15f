"""Finite-difference assembly for the scalar problems.

Dirichlet truncation throughout: matrices act on the interior nodes of the
grid (both endpoints clamped to zero).  The 3-point stencil gives the
standard discrete spectrum

    (2/h^2) * (1 - cos(m*pi*h/(2X))) + beta,   m = 1..n_interior,

used as the closed-form oracle in tests.

The divergence-form operator -d/dx(p(x) d/dx .) - w(x) with nodal
coefficient c(x) = lambda + u_-/+ (p = 1/c) uses harmonic-mean half-node
coefficients p_{i+1/2} = 2/(c_i + c_{i+1}), which preserves symmetry and
second-order accuracy across coefficient jumps; it serves as a residual
diagnostic (lambda is an eigenvalue candidate iff the assembled operator
has 0 in its spectrum), not as an eigenvalue search.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eigensolve import SymTridiag, sturm_count
from .potential import Branch, Grid, RiemannFields

__all__ = ["ScalarProblem", "laplacian_plus_beta", "sturm_liouville_lambda_form"]


@dataclass(frozen=True)
class ScalarProblem:
    """Divergence-form stiffness plus a diagonal potential on interior nodes.

    The operator is stiffness - diag(potential_diag); zero in its spectrum
    marks an eigenvalue candidate of the underlying nonlinear problem.
    """

    grid: Grid
    stiffness: SymTridiag
    potential_diag: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.potential_diag, dtype=float)
        if w.shape != (self.stiffness.n,):
            raise ValueError("potential_diag length must match the stiffness dimension")
        object.__setattr__(self, "potential_diag", w)

    def operator(self) -> SymTridiag:
        return SymTridiag(self.stiffness.diag - self.potential_diag, self.stiffness.offdiag)

    def count_below(self, x: float) -> int:
        return sturm_count(self.operator(), x)


def laplacian_plus_beta(grid: Grid, beta: float) -> SymTridiag:
    """(1/h^2) tridiag(-1, 2, -1) + beta*I on the interior nodes.

    Positive definite for beta > 0 (smallest eigenvalue >= beta).
    """
    if not np.isfinite(beta) or beta < 0:
        raise ValueError(f"beta must be finite and >= 0, got {beta}")
    m = grid.n_points - 2
    h2 = grid.spacing**2
    return SymTridiag(np.full(m, 2.0 / h2 + beta), np.full(m - 1, -1.0 / h2))


def sturm_liouville_lambda_form(fields: RiemannFields, lam: float, branch: Branch) -> ScalarProblem:
    """Discrete -d/dx((1/(lam+u)) d/dx .) - (lam+u_other) on interior nodes.

    For branch U_MINUS_IS_MINUS_ONE the coefficient is 1/(lam+u_minus) and the
    multiplier lam+u_plus; roles swap for U_PLUS_IS_ONE.

    Raises:
        ValueError: |lam + u| < 1e-8 at some node (the reduction is invalid
            there); the failing abscissa is named.
    """
    if branch is Branch.U_MINUS_IS_MINUS_ONE:
        c = lam + fields.u_minus
        w = lam + fields.u_plus
    else:
        c = lam + fields.u_plus
        w = lam + fields.u_minus
    bad = np.abs(c) < 1e-8
    if np.any(bad):
        x_bad = fields.grid.nodes[bad][0]
        raise ValueError(
            f"coefficient lambda + u vanishes (|{c[bad][0]:.3g}| < 1e-8) at "
            f"x = {x_bad:+g}: the scalar reduction is invalid for lambda = {lam:g}"
        )
    # harmonic-mean half-node coefficients p_{i+1/2} = 2/(c_i + c_{i+1})
    p_half = 2.0 / (c[:-1] + c[1:])
    if not np.all(np.isfinite(p_half)):
        raise ValueError("half-node coefficient overflow: c_i + c_{i+1} ~ 0 between nodes")
    h2 = fields.grid.spacing**2
    # row i (interior): (-p_{i-1/2} phi_{i-1} + (p_{i-1/2}+p_{i+1/2}) phi_i - p_{i+1/2} phi_{i+1})/h^2
    diag = (p_half[:-1] + p_half[1:]) / h2
    off = -p_half[1:-1] / h2
    stiff = SymTridiag(diag, off)
    return ScalarProblem(grid=fields.grid, stiffness=stiff, potential_diag=w[1:-1])
