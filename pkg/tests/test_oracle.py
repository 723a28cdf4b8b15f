"""Analytic reference values: square-well matching roots and closed forms."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from laxgap.oracle import (
    SquareWellRoots,
    dark_soliton_lambda,
    square_well_kappa,
    square_well_mu,
)


def _g(kappa, k):
    return (kappa**2 - k * k) * math.sin(kappa) - 2.0 * k * kappa * math.cos(kappa)


# --- matching-equation roots -------------------------------------------------

# first four roots at k = 1, frozen from a bisection at tol 1e-13
KAPPAS_K1 = [
    1.3065423741887903,
    3.673194406304246,
    6.584620042564143,
    9.631684635691855,
]


def test_kappas_at_k_one_frozen():
    roots = square_well_kappa(1.0, 4)
    assert np.allclose(roots.kappas, KAPPAS_K1, rtol=0, atol=1e-12)


def test_kappas_are_roots_with_small_residual():
    roots = square_well_kappa(1.0, 4)
    for kappa in roots.kappas:
        assert abs(_g(kappa, 1.0)) < 1e-10 * (1.0 + kappa**2)


def test_kappa_j_sits_in_its_pi_window():
    roots = square_well_kappa(1.0, 4)
    for j, kappa in enumerate(roots.kappas, start=1):
        assert (j - 1) * math.pi < kappa < j * math.pi


def test_small_k_limits():
    # kappa_1 ~ sqrt(2k) and kappa_2 -> pi from above as k -> 0+
    roots = square_well_kappa(1e-4, 2)
    k1, k2 = roots.kappas
    assert abs(k1 - math.sqrt(2e-4)) < 1e-3 * math.sqrt(2e-4) + 1e-6
    assert 0 < k2 - math.pi < 1e-3


def test_kappa_tan_form_at_k_tenth():
    # equivalent root condition tan(kappa) = 2*k*kappa / (kappa^2 - k^2)
    k = 0.1
    kappa = square_well_kappa(k, 1).kappas[0]
    assert abs(kappa - 0.4435207878818937) < 1e-12
    assert abs(math.tan(kappa) - 2 * k * kappa / (kappa**2 - k * k)) < 1e-10


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=1e-3, max_value=1.0))
def test_roots_increasing_and_windowed_for_gap_wavenumbers(k):
    roots = square_well_kappa(k, 3)
    ks = roots.kappas
    assert np.all(np.diff(ks) > 0)
    for j, kappa in enumerate(ks, start=1):
        assert (j - 1) * math.pi < kappa < j * math.pi
        assert abs(_g(kappa, k)) < 1e-10 * (1.0 + kappa**2)


def test_roots_container_rejects_non_increasing():
    with pytest.raises(ValueError):
        SquareWellRoots(k=1.0, kappas=np.array([2.0, 1.0]))
    with pytest.raises(ValueError):
        SquareWellRoots(k=1.0, kappas=np.array([]))


def test_kappa_argument_validation():
    with pytest.raises(ValueError):
        square_well_kappa(-1.0, 2)
    with pytest.raises(ValueError):
        square_well_kappa(1.0, 0)


# --- mu closed form -----------------------------------------------------------


def test_square_well_mu_frozen_value():
    assert abs(square_well_mu(0.5, 0.25, 1) - (-0.4266347480747628)) < 1e-13


def test_square_well_mu_increasing_in_j_and_negative():
    m1 = square_well_mu(0.5, 0.25, 1)
    m2 = square_well_mu(0.5, 0.25, 2)
    assert m1 < m2 < 0


def test_square_well_mu_scales_linearly_in_depth():
    # kappa_j depends only on beta, so mu is proportional to eps
    assert square_well_mu(1.0, 0.3, 2) == pytest.approx(
        2.0 * square_well_mu(0.5, 0.3, 2), rel=1e-14
    )


def test_square_well_mu_rejects_tiny_beta_for_first_index():
    with pytest.raises(ValueError, match="not reliably computable"):
        square_well_mu(0.5, 1e-12, 1)
    # deeper indices stay finite in the beta -> 0 limit
    assert square_well_mu(0.5, 1e-12, 2) < 0


def test_square_well_mu_argument_validation():
    with pytest.raises(ValueError):
        square_well_mu(0.0, 0.25, 1)
    with pytest.raises(ValueError):
        square_well_mu(1.5, 0.25, 1)
    with pytest.raises(ValueError):
        square_well_mu(0.5, -0.25, 1)
    with pytest.raises(ValueError):
        square_well_mu(0.5, 0.25, 0)


# --- dark-soliton eigenvalue ---------------------------------------------------


def test_dark_soliton_lambda_exact_point():
    assert dark_soliton_lambda(0.6) == -0.8


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=0.01, max_value=0.5))
def test_dark_soliton_lambda_shallow_expansion(eps):
    # -sqrt(1-eps^2) = -1 + eps^2/2 + O(eps^4)
    lam = dark_soliton_lambda(eps)
    assert -1.0 < lam < 0.0
    assert abs(lam - (-1.0 + 0.5 * eps * eps)) <= eps**4


def test_dark_soliton_lambda_rejects_out_of_range():
    with pytest.raises(ValueError):
        dark_soliton_lambda(0.0)
    with pytest.raises(ValueError):
        dark_soliton_lambda(1.0)
