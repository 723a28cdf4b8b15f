"""Dirichlet assembly of the shifted Laplacian and the lambda-form problem."""
import numpy as np
import pytest

from laxgap.discretize import (
    ScalarProblem,
    laplacian_plus_beta,
    sturm_liouville_lambda_form,
)
from laxgap.eigensolve import eig_interval
from laxgap.potential import Branch, DarkSoliton, Grid, riemann_invariants

# --- shifted Laplacian ---------------------------------------------------------


def test_laplacian_closed_form_spectrum():
    grid = Grid(8.0, 66)
    t = laplacian_plus_beta(grid, 0.7)
    n, h = 64, grid.spacing
    dense = np.diag(t.diag) + np.diag(t.offdiag, 1) + np.diag(t.offdiag, -1)
    got = np.linalg.eigvalsh(dense)
    exact = 0.7 + (2.0 / h**2) * (1.0 - np.cos(np.arange(1, n + 1) * np.pi / (n + 1)))
    assert np.max(np.abs(got - exact)) < 1e-10 * np.max(exact)


def test_laplacian_minimal_grid():
    t = laplacian_plus_beta(Grid(1.0, 3), 0.0)
    assert t.diag.shape == (1,) and t.diag[0] == pytest.approx(2.0)
    assert t.offdiag.shape == (0,)


def test_laplacian_rejects_negative_shift():
    with pytest.raises(ValueError):
        laplacian_plus_beta(Grid(1.0, 11), -0.1)


# --- scalar problem container -----------------------------------------------------


def test_scalar_problem_operator_subtracts_potential():
    grid = Grid(6.0, 61)
    w = np.sin(grid.interior)
    prob = ScalarProblem(
        grid=grid, stiffness=laplacian_plus_beta(grid, 0.25), potential_diag=w
    )
    op = prob.operator()
    assert np.allclose(op.diag, prob.stiffness.diag - w)
    assert np.allclose(op.offdiag, prob.stiffness.offdiag)


def test_scalar_problem_count_matches_dense():
    grid = Grid(6.0, 61)
    w = np.where(np.abs(grid.interior) < 2.0, 1.5, 0.0)
    prob = ScalarProblem(
        grid=grid, stiffness=laplacian_plus_beta(grid, 0.25), potential_diag=w
    )
    t = prob.operator()
    dense = np.diag(t.diag) + np.diag(t.offdiag, 1) + np.diag(t.offdiag, -1)
    ev = np.linalg.eigvalsh(dense)
    for x in (-1.0, 0.0, 0.5, 2.0):
        assert prob.count_below(x) == int(np.sum(ev < x))


# --- lambda-form assembly ------------------------------------------------------------

# smallest |eigenvalue| of the lambda-form problem at the exact dark-soliton
# eigenvalue lambda = -0.8 (eps = 0.6, X = 40); consistency of the
# discretization shows as O(h^2) decay under grid refinement
E_MIN_BY_POINTS = {
    1001: 2.1544259868862908e-05,
    2001: 5.384405117288369e-06,
    4001: 1.3459974776900879e-06,
}


def _smallest_magnitude(n_points: int) -> float:
    grid = Grid(40.0, n_points)
    fields = riemann_invariants(DarkSoliton(0.6), grid)
    prob = sturm_liouville_lambda_form(fields, -0.8, Branch.U_MINUS_IS_MINUS_ONE)
    pairs = eig_interval(prob.operator(), -0.1, 0.1)
    assert len(pairs) == 1
    return abs(pairs[0][0])


def test_lambda_form_vanishes_at_true_eigenvalue_under_refinement():
    e = {n: _smallest_magnitude(n) for n in (1001, 2001, 4001)}
    for n, expect in E_MIN_BY_POINTS.items():
        assert e[n] == pytest.approx(expect, rel=1e-6)
    assert e[1001] / e[2001] > 3.0
    assert e[2001] / e[4001] > 3.0
    assert e[4001] < 2e-6


def test_lambda_form_rejects_vanishing_denominator():
    grid = Grid(40.0, 1001)
    fields = riemann_invariants(DarkSoliton(0.6), grid)
    # lambda = -u_plus at the mid node makes the plus-branch coefficient vanish
    lam = -float(fields.u_plus[500])
    with pytest.raises(ValueError, match="vanishes"):
        sturm_liouville_lambda_form(fields, lam, Branch.U_PLUS_IS_ONE)
