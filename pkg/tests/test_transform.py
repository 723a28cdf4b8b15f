"""Unitary reduction of the Dirac operator and the filtered gap spectrum."""
import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from laxgap.potential import (
    DarkSoliton,
    Grid,
    PiecewiseConstantQ,
    Segment,
    aligned_grid,
    riemann_invariants,
)
from laxgap.transform import (
    GapMode,
    SpinorField,
    apply_m,
    assemble_L,
    assemble_calL,
    block_m_matrix,
    filtered_gap_spectrum,
    gap_eigenpairs,
    m_matrix_at,
)

FREE = PiecewiseConstantQ(segments=())

# --- the pointwise rotation ------------------------------------------------------


@settings(max_examples=50, deadline=None)
@given(st.floats(min_value=-12.0, max_value=12.0))
def test_m_matrix_is_unitary(phase):
    m = m_matrix_at(phase)
    assert np.max(np.abs(m @ m.conj().T - np.eye(2))) < 1e-14
    assert abs(abs(np.linalg.det(m)) - 1.0) < 1e-14


def test_m_matrix_at_quarter_turn_is_real_hadamard_type():
    m = m_matrix_at(math.pi / 2)
    assert np.allclose(m, np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0))


def test_m_matrix_half_angle_periodicity():
    for phase in (0.0, 1.3, -2.0):
        assert np.allclose(m_matrix_at(phase + 4.0 * math.pi), m_matrix_at(phase))
        assert not np.allclose(m_matrix_at(phase + 2.0 * math.pi), m_matrix_at(phase))


def test_apply_m_on_free_potential():
    grid = Grid(10.0, 65)
    fields = riemann_invariants(FREE, grid)
    psi = SpinorField(grid=grid, comp1=np.ones(65, complex), comp2=np.zeros(65, complex))
    out = apply_m(fields, psi)
    # phase 0 everywhere: both output components are e^{i pi/4}/sqrt(2)
    expect = np.exp(1j * math.pi / 4.0) / math.sqrt(2.0)
    assert np.allclose(out.comp1, expect)
    assert np.allclose(out.comp2, expect)


def test_apply_m_round_trips_through_inverse():
    grid = Grid(14.0, 65)
    fields = riemann_invariants(DarkSoliton(0.6), grid)
    rng = np.random.default_rng(2)
    psi = SpinorField(
        grid=grid,
        comp1=rng.normal(size=65) + 1j * rng.normal(size=65),
        comp2=rng.normal(size=65) + 1j * rng.normal(size=65),
    )
    back = apply_m(fields, apply_m(fields, psi), inverse=True)
    assert np.allclose(back.comp1, psi.comp1, atol=1e-13)
    assert np.allclose(back.comp2, psi.comp2, atol=1e-13)


def test_block_m_matrix_is_unitary():
    phi = np.linspace(-1.0, 2.0, 30)
    z = block_m_matrix(phi)
    assert z.shape == (60, 60)
    assert np.max(np.abs(z @ z.conj().T - np.eye(60))) < 1e-13


# --- assembly -----------------------------------------------------------------------


def test_assembled_operators_are_hermitian():
    grid = Grid(20.0, 401)
    op_l = assemble_L(DarkSoliton(0.6), grid)
    op_c = assemble_calL(riemann_invariants(DarkSoliton(0.6), grid))
    assert op_l.hermiticity_defect() == 0.0
    assert op_c.hermiticity_defect() == 0.0
    assert op_l.dense().shape == (2 * 399, 2 * 399)


def test_assembly_rejects_tiny_grids():
    with pytest.raises(ValueError):
        assemble_L(FREE, Grid(8.0, 15))


def test_matvec_agrees_with_dense():
    grid = Grid(16.0, 33)
    op = assemble_calL(riemann_invariants(DarkSoliton(0.5), grid))
    rng = np.random.default_rng(4)
    z = rng.normal(size=62) + 1j * rng.normal(size=62)
    assert np.allclose(op.matvec(z), op.dense() @ z)


def test_operator_text_dump_round_trips():
    grid = Grid(12.0, 17)
    op = assemble_calL(riemann_invariants(FREE, grid))
    buf = io.StringIO()
    count = op.to_text(buf)
    lines = buf.getvalue().strip().splitlines()
    assert count == len(lines)
    dense = op.dense()
    rebuilt = np.zeros_like(dense)
    for line in lines:
        i, j, re, im = line.split()
        rebuilt[int(i), int(j)] = float(re) + 1j * float(im)
    assert np.array_equal(rebuilt, dense)
    assert count == int(np.sum(dense != 0))


# --- gap spectra ----------------------------------------------------------------------


def test_free_operator_spectrum_stays_outside_gap():
    grid = Grid(8.0, 64)
    op = assemble_L(FREE, grid)
    w = np.linalg.eigvalsh(op.dense())
    assert float(np.min(np.abs(w))) == pytest.approx(1.0048065925548006, abs=1e-12)
    assert gap_eigenpairs(op) == []


def test_constant_phase_operators_share_raw_gap_spectrum():
    spec = PiecewiseConstantQ((Segment(x_lo=-2.0, x_hi=2.0, amplitude=0.7),))
    grid = aligned_grid(spec, 12.0, 512)
    vals_l = sorted(v for v, _ in gap_eigenpairs(assemble_L(spec, grid)))
    vals_c = sorted(
        v for v, _ in gap_eigenpairs(assemble_calL(riemann_invariants(spec, grid)))
    )
    assert len(vals_l) == len(vals_c) == 4
    assert max(abs(a - b) for a, b in zip(vals_l, vals_c)) < 1e-12


def test_filtered_spectrum_dark_soliton_regression():
    modes = filtered_gap_spectrum(DarkSoliton(0.6), Grid(40.0, 2001))
    assert len(modes) == 1
    mode = modes[0]
    assert isinstance(mode, GapMode)
    assert mode.value == pytest.approx(-0.7999796835371715, abs=1e-9)
    assert mode.refined_value == pytest.approx(-0.7999949224755103, abs=1e-9)
    assert abs(mode.refined_value + 0.8) < abs(mode.value + 0.8)
    assert mode.drift < 1e-4
    assert mode.boundary_mass < 1e-4
    assert mode.smooth_fraction_sq > 0.5
    assert mode.interleaved.shape == (2 * 1999,)


def test_filtered_spectrum_full_dirac_agrees():
    modes = filtered_gap_spectrum(DarkSoliton(0.6), Grid(40.0, 2001), operator="L")
    assert len(modes) == 1
    assert modes[0].value == pytest.approx(-0.8000060403988501, abs=1e-9)


def test_filtered_spectrum_rejects_unknown_operator():
    with pytest.raises(ValueError, match="operator"):
        filtered_gap_spectrum(FREE, Grid(10.0, 65), operator="dirac")


# --- spinor container -------------------------------------------------------------------


def test_spinor_norm_and_validation():
    grid = Grid(2.0, 5)
    psi = SpinorField(grid=grid, comp1=np.ones(5, complex), comp2=np.zeros(5, complex))
    assert psi.norm_l2() == pytest.approx(math.sqrt(grid.spacing * 5))
    with pytest.raises(ValueError):
        SpinorField(grid=grid, comp1=np.ones(4, complex), comp2=np.zeros(5, complex))
    bad = np.ones(5, complex)
    bad[2] = math.inf
    with pytest.raises(ValueError):
        SpinorField(grid=grid, comp1=bad, comp2=np.zeros(5, complex))
