"""Potential families, Riemann invariants, and grid plumbing."""
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from laxgap.potential import (
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

# --- grids -------------------------------------------------------------------


def test_grid_basic_geometry():
    g = Grid(5.0, 11)
    assert g.spacing == pytest.approx(1.0)
    assert g.nodes[0] == -5.0 and g.nodes[-1] == 5.0
    assert g.interior.shape == (9,)
    assert np.allclose(np.diff(g.nodes), g.spacing)


def test_grid_validation():
    with pytest.raises(ValueError):
        Grid(5.0, 2)
    with pytest.raises(ValueError):
        Grid(-1.0, 11)
    with pytest.raises(ValueError):
        Grid(math.inf, 11)


# --- dark soliton --------------------------------------------------------------


def test_dark_soliton_pointwise_values():
    spec = DarkSoliton(0.6)
    assert spec.amplitude_at(np.array([0.0]))[0] == pytest.approx(0.8)
    # pg(0) = -eps^2 sqrt(1-eps^2) / (1-eps^2) = -0.45 at eps = 0.6
    assert spec.phase_gradient_at(np.array([0.0]))[0] == pytest.approx(-0.45)
    # modulus -> 1 and phase gradient -> 0 away from the dip
    assert spec.amplitude_at(np.array([30.0]))[0] == pytest.approx(1.0, abs=1e-12)
    assert abs(spec.phase_gradient_at(np.array([30.0]))[0]) < 1e-12


def test_dark_soliton_gap_potential_depth():
    # V(0) = u_plus(0) - 1 = pg(0)/2 + |q|(0) - 1 = -0.425 at eps = 0.6
    fields = riemann_invariants(DarkSoliton(0.6), Grid(40.0, 4001))
    V = gap_potential_V(fields)
    assert np.min(V) == pytest.approx(-0.425, abs=1e-12)
    assert np.max(V) <= 0.0


def test_dark_soliton_is_not_on_the_minus_branch():
    # u_minus + 1 peaks at -eps^2 sqrt(1-eps^2)/(2(1-eps^2)) + 1 - sqrt(1-eps^2):
    # a genuine 2.5e-2 defect at eps = 0.6, which is why the direct
    # discretization (not the scalar pipeline) handles this family
    fields = riemann_invariants(DarkSoliton(0.6), Grid(40.0, 4001))
    defect = np.max(np.abs(fields.u_minus + 1.0))
    assert 0.02 < defect < 0.03


def test_dark_soliton_phase_drop():
    # total phase change is -2*asin(eps)
    g = Grid(40.0, 4001)
    phi = phase_profile(DarkSoliton(0.6), g, phase_left=0.25)
    assert phi[0] == 0.25
    drop = phi[-1] - phi[0]
    assert drop == pytest.approx(-2.0 * math.asin(0.6), abs=1e-5)


# --- square well ----------------------------------------------------------------


def test_square_well_left_limit_convention():
    spec = SquareWell(0.5)
    x = np.array([-0.5, 0.0, 0.5, 1.0, 1.25])
    assert np.allclose(spec.amplitude_at(x), [1.0, 1.0, 0.75, 0.75, 1.0])
    assert np.allclose(spec.phase_gradient_at(x), [0.0, 0.0, -0.5, -0.5, 0.0])
    assert spec.segment_points() == (0.0, 1.0)


def test_square_well_sits_exactly_on_minus_branch():
    g = aligned_grid(SquareWell(0.5), 20.0, 401)
    fields = riemann_invariants(SquareWell(0.5), g)
    assert np.max(np.abs(fields.u_minus + 1.0)) <= 1e-15
    V = gap_potential_V(fields)
    assert np.min(V) == pytest.approx(-0.5)
    assert np.all(mirrored_gap_potential(fields) <= 1e-15)


def test_square_well_validation():
    with pytest.raises(ValueError):
        SquareWell(0.0)
    with pytest.raises(ValueError):
        SquareWell(1.2)


# --- piecewise-constant q -------------------------------------------------------


def test_piecewise_q_free_case():
    free = PiecewiseConstantQ(segments=())
    g = Grid(10.0, 201)
    assert np.allclose(free.amplitude_at(g.nodes), 1.0)
    assert np.allclose(free.phase_gradient_at(g.nodes), 0.0)
    fields = riemann_invariants(free, g)
    assert np.allclose(fields.u_plus, 1.0)
    assert np.allclose(fields.u_minus, -1.0)


def test_piecewise_q_segment_values_and_jumps():
    seg = Segment(x_lo=-2.0, x_hi=-1.0, amplitude=0.7, phase=0.3)
    spec = PiecewiseConstantQ(segments=(seg,))
    x = np.array([-3.0, -1.5, 0.0])
    assert np.allclose(spec.amplitude_at(x), [1.0, 0.7, 1.0])
    assert np.allclose(spec.phase_at(x), [0.0, 0.3, 0.0])
    assert spec.segment_points() == (-2.0, -1.0)


def test_piecewise_q_rejects_overlap():
    a = Segment(x_lo=0.0, x_hi=2.0, amplitude=0.7)
    b = Segment(x_lo=1.0, x_hi=3.0, amplitude=0.8)
    with pytest.raises(ValueError):
        PiecewiseConstantQ(segments=(a, b))


# --- sampled potentials ----------------------------------------------------------


def test_sampled_locked_to_own_nodes():
    g = Grid(10.0, 101)
    spec = Sampled(amplitude=np.ones(101), phase_gradient=np.zeros(101), grid=g)
    assert np.allclose(spec.amplitude_at(g.nodes), 1.0)
    with pytest.raises(ValueError, match="off its own grid"):
        spec.amplitude_at(np.array([0.003]))


def test_sampled_validation():
    g = Grid(10.0, 101)
    with pytest.raises(ValueError):
        Sampled(amplitude=np.ones(100), phase_gradient=np.zeros(101), grid=g)
    amp = np.ones(101)
    amp[3] = -0.1
    with pytest.raises(ValueError):
        Sampled(amplitude=amp, phase_gradient=np.zeros(101), grid=g)


def test_riemann_invariants_warn_on_nonunit_boundary():
    g = Grid(10.0, 101)
    spec = Sampled(amplitude=np.full(101, 1.2), phase_gradient=np.zeros(101), grid=g)
    with pytest.warns(UserWarning, match="unit modulus"):
        riemann_invariants(spec, g)


def test_riemann_fields_reject_crossed_invariants():
    g = Grid(10.0, 11)
    with pytest.raises(ValueError):
        RiemannFields(grid=g, u_plus=-np.ones(11), u_minus=np.ones(11))


# --- sup-norm parts -----------------------------------------------------------------


def test_part_norms_simple():
    assert part_norms(np.array([-0.5, 0.2, 0.0])) == (0.2, 0.5)
    assert part_norms(np.array([0.0, 0.0])) == (0.0, 0.0)


def test_part_norms_validation():
    with pytest.raises(ValueError):
        part_norms(np.array([]))
    with pytest.raises(ValueError):
        part_norms(np.array([1.0, math.nan]))


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(min_value=-10, max_value=10), min_size=1, max_size=20))
def test_part_norms_negation_swaps_parts(values):
    f = np.array(values)
    plus, minus = part_norms(f)
    assert (minus, plus) == part_norms(-f)
    assert plus >= 0 and minus >= 0
    assert max(plus, minus) == pytest.approx(np.max(np.abs(f)))


# --- JSON round trip ------------------------------------------------------------------


def test_json_round_trip_builtins():
    for spec in (DarkSoliton(0.37), SquareWell(0.81)):
        assert potential_from_json(potential_to_json(spec)) == spec


def test_json_round_trip_piecewise():
    spec = PiecewiseConstantQ(
        segments=(
            Segment(x_lo=-2.0, x_hi=-1.0, amplitude=0.7, phase=0.3),
            Segment(x_lo=0.5, x_hi=1.5, amplitude=1.2, phase=0.0),
        )
    )
    assert potential_from_json(potential_to_json(spec)) == spec


def test_json_round_trip_sampled():
    g = Grid(5.0, 21)
    spec = Sampled(
        amplitude=1.0 + 0.1 * np.sin(g.nodes) ** 2,
        phase_gradient=0.05 * np.cos(g.nodes),
        grid=g,
    )
    back = potential_from_json(potential_to_json(spec))
    assert isinstance(back, Sampled)
    assert back.grid == g
    assert np.allclose(back.amplitude, spec.amplitude)
    assert np.allclose(back.phase_gradient, spec.phase_gradient)


def test_json_malformed_inputs():
    with pytest.raises(ValueError, match="family"):
        potential_from_json("[]")
    with pytest.raises(ValueError, match="unknown potential family"):
        potential_from_json(json.dumps({"family": "bogus"}))
    with pytest.raises(ValueError, match="malformed"):
        potential_from_json(json.dumps({"family": "dark-soliton"}))
    with pytest.raises(ValueError, match="malformed"):
        potential_from_json(json.dumps({"family": "square-well", "eps": "deep"}))


# --- jump-aligned grids --------------------------------------------------------------


def test_aligned_grid_snaps_jumps_to_nodes():
    well = SquareWell(0.5)
    for half_width, n_req, n_exp in ((30.0, 2000, 2041), (40.0, 8001, 8001), (20.0, 200, 201)):
        g = aligned_grid(well, half_width, n_req)
        assert g.n_points == n_exp
        for p in well.segment_points():
            steps = (p + half_width) / g.spacing
            assert abs(steps - round(steps)) < 1e-9


def test_aligned_grid_passthrough_without_jumps():
    g = aligned_grid(DarkSoliton(0.6), 30.0, 2000)
    assert g == Grid(30.0, 2000)
