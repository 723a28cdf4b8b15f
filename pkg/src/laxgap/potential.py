"""Potential families and their Riemann-invariant fields.

The operators in this package act on spinors over a symmetric interval
[-X, X].  A potential q(x) = |q(x)| * exp(i*phi(x)) with non-vanishing
modulus enters every computation only through its modulus and phase
gradient, bundled as the pair of Riemann invariants

    u_plus  = phase_gradient/2 + |q|,
    u_minus = phase_gradient/2 - |q|.

This module defines the grid, the potential families, sampling of the
invariants, and the small field operations (positive/negative part
sup-norms, the gap potential V = u_plus - 1) used downstream.

Conventions
-----------
* The stored quantity is the phase *gradient*, never the phase itself;
  the phase is reconstructed by trapezoidal integration anchored at the
  left endpoint (phi(-X) = 0 unless a family carries an explicit phase).
  This avoids branch-cut ambiguity of arg(q).
* Families with jump discontinuities declare their jump abscissae via
  ``segment_points`` so grids can be aligned; the node value at a jump
  takes the left limit.
"""

from __future__ import annotations

import enum
import json
import warnings
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

__all__ = [
    "Branch",
    "Grid",
    "DarkSoliton",
    "SquareWell",
    "Segment",
    "PiecewiseConstantQ",
    "Sampled",
    "PotentialSpec",
    "RiemannFields",
    "riemann_invariants",
    "part_norms",
    "gap_potential_V",
    "mirrored_gap_potential",
    "phase_profile",
    "potential_from_json",
    "potential_to_json",
    "aligned_grid",
]

BOUNDARY_TOL = 1e-6


class Branch(enum.Enum):
    """Which Riemann invariant is constant, selecting the scalar reduction.

    U_MINUS_IS_MINUS_ONE: u_minus == -1, gap potential V = u_plus - 1.
    U_PLUS_IS_ONE: u_plus == 1; handled by the reflection
    (u_plus, u_minus, lambda) -> (-u_minus, -u_plus, -lambda).
    """

    U_MINUS_IS_MINUS_ONE = "u-minus-is-minus-one"
    U_PLUS_IS_ONE = "u-plus-is-one"


@dataclass(frozen=True)
class Grid:
    """Uniform symmetric grid on [-half_width, half_width].

    Attributes:
        half_width: X > 0; the domain is [-X, X].
        n_points: total node count including both endpoints (>= 3).
        spacing: h = 2X / (n_points - 1).
        nodes: the n_points abscissae, nodes[0] = -X, nodes[-1] = X.
    """

    half_width: float
    n_points: int
    spacing: float = field(init=False, compare=False)
    nodes: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not np.isfinite(self.half_width) or self.half_width <= 0:
            raise ValueError(f"half_width must be positive and finite, got {self.half_width}")
        if self.n_points < 3:
            raise ValueError(f"n_points must be >= 3, got {self.n_points}")
        h = 2.0 * self.half_width / (self.n_points - 1)
        x = np.linspace(-self.half_width, self.half_width, self.n_points)
        object.__setattr__(self, "spacing", h)
        object.__setattr__(self, "nodes", x)

    @property
    def interior(self) -> np.ndarray:
        """Nodes with the two Dirichlet endpoints dropped."""
        return self.nodes[1:-1]


@dataclass(frozen=True)
class DarkSoliton:
    """q(x) = eps*tanh(eps*x) + i*sqrt(1 - eps^2), eps in (0, 1).

    Modulus dips to sqrt(1-eps^2) at the origin and tends to 1 at
    infinity; the phase gradient is a localized bump of size O(eps^2).
    """

    eps: float

    def __post_init__(self):
        if not 0.0 < self.eps < 1.0:
            raise ValueError(f"DarkSoliton requires eps in (0, 1), got {self.eps}")

    def amplitude_at(self, x: np.ndarray) -> np.ndarray:
        sech2 = 1.0 / np.cosh(self.eps * np.asarray(x, dtype=float)) ** 2
        return np.sqrt(1.0 - self.eps**2 * sech2)

    def phase_gradient_at(self, x: np.ndarray) -> np.ndarray:
        e = self.eps
        sech2 = 1.0 / np.cosh(e * np.asarray(x, dtype=float)) ** 2
        # d/dx arg(q) for q = e*tanh(e x) + i*sqrt(1-e^2)
        return -(e**2) * np.sqrt(1.0 - e**2) * sech2 / (1.0 - e**2 * sech2)

    def segment_points(self) -> tuple[float, ...]:
        return ()


@dataclass(frozen=True)
class SquareWell:
    """Square-well gap potential of depth eps in (0, 1].

    Defined directly through its Riemann invariants: u_minus == -1 and
    u_plus = 1 + V with V = -eps on (0, 1] and 0 elsewhere.  The
    underlying q has |q| = (u_plus + 1)/2 and phase gradient u_plus - 1.
    """

    eps: float

    def __post_init__(self):
        if not 0.0 < self.eps <= 1.0:
            raise ValueError(f"SquareWell requires eps in (0, 1], got {self.eps}")

    def _v(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        # left-limit convention at the jumps: V(0) = 0, V(1) = -eps
        return np.where((x > 0.0) & (x <= 1.0), -self.eps, 0.0)

    def amplitude_at(self, x: np.ndarray) -> np.ndarray:
        return 1.0 + 0.5 * self._v(x)

    def phase_gradient_at(self, x: np.ndarray) -> np.ndarray:
        return self._v(x)

    def segment_points(self) -> tuple[float, ...]:
        return (0.0, 1.0)


@dataclass(frozen=True)
class Segment:
    """One piece of a piecewise-constant potential: q = amplitude*e^{i phase} on [x_lo, x_hi)."""

    x_lo: float
    x_hi: float
    amplitude: float
    phase: float = 0.0

    def __post_init__(self):
        if not self.x_lo < self.x_hi:
            raise ValueError(f"segment needs x_lo < x_hi, got [{self.x_lo}, {self.x_hi})")
        if not np.isfinite(self.amplitude) or self.amplitude < 0:
            raise ValueError(f"segment amplitude must be finite and >= 0, got {self.amplitude}")


@dataclass(frozen=True)
class PiecewiseConstantQ:
    """Piecewise-constant q: given segments, with q == 1 outside all of them.

    The phase profile is piecewise constant, so the phase gradient is 0
    at every node (its a.e. derivative); segments with unequal phases
    have distributional phase jumps that the invariant representation
    cannot carry, and are honored only by the explicit-phase consumers
    (the unitary M and the full Dirac assembly).
    """

    segments: tuple[Segment, ...]

    def __init__(self, segments: Sequence[Segment] = ()):
        segs = tuple(segments)
        for a, b in zip(segs, segs[1:]):
            if b.x_lo < a.x_hi:
                raise ValueError("segments must be sorted and non-overlapping")
        object.__setattr__(self, "segments", segs)

    def amplitude_at(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.ones_like(x)
        for s in self.segments:
            # left-limit convention: value on (x_lo, x_hi]
            out = np.where((x > s.x_lo) & (x <= s.x_hi), s.amplitude, out)
        return out

    def phase_gradient_at(self, x: np.ndarray) -> np.ndarray:
        return np.zeros_like(np.asarray(x, dtype=float))

    def phase_at(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for s in self.segments:
            out = np.where((x > s.x_lo) & (x <= s.x_hi), s.phase, out)
        return out

    def segment_points(self) -> tuple[float, ...]:
        pts: list[float] = []
        for s in self.segments:
            pts.extend((s.x_lo, s.x_hi))
        return tuple(sorted(set(pts)))


@dataclass(frozen=True)
class Sampled:
    """Potential given by node samples of modulus and phase gradient on its own grid."""

    amplitude: np.ndarray
    phase_gradient: np.ndarray
    grid: Grid

    def __post_init__(self):
        amp = np.asarray(self.amplitude, dtype=float)
        pg = np.asarray(self.phase_gradient, dtype=float)
        if amp.shape != (self.grid.n_points,) or pg.shape != (self.grid.n_points,):
            raise ValueError(
                f"sample arrays must have shape ({self.grid.n_points},); "
                f"got {amp.shape} and {pg.shape}"
            )
        if not np.all(np.isfinite(amp)) or not np.all(np.isfinite(pg)):
            raise ValueError("sampled potential contains non-finite values")
        if np.any(amp < 0):
            raise ValueError("sampled amplitude must be nonnegative")
        object.__setattr__(self, "amplitude", amp)
        object.__setattr__(self, "phase_gradient", pg)

    def amplitude_at(self, x: np.ndarray) -> np.ndarray:
        self._check_grid(x)
        return self.amplitude[self._index(x)]

    def phase_gradient_at(self, x: np.ndarray) -> np.ndarray:
        self._check_grid(x)
        return self.phase_gradient[self._index(x)]

    def _check_grid(self, x: np.ndarray):
        x = np.asarray(x, dtype=float)
        idx = self._index(x)
        if np.any(np.abs(self.grid.nodes[idx] - x) > 1e-9 * max(1.0, self.grid.half_width)):
            raise ValueError("sampled potential evaluated off its own grid nodes")

    def _index(self, x: np.ndarray) -> np.ndarray:
        return np.clip(
            np.rint((np.asarray(x, dtype=float) + self.grid.half_width) / self.grid.spacing),
            0,
            self.grid.n_points - 1,
        ).astype(int)

    def segment_points(self) -> tuple[float, ...]:
        return ()


PotentialSpec = Union[DarkSoliton, SquareWell, PiecewiseConstantQ, Sampled]


@dataclass(frozen=True)
class RiemannFields:
    """Node samples of the Riemann invariants on a grid.

    Invariants: u_plus >= u_minus pointwise (their half-difference is
    |q| >= 0); both arrays are finite and live on grid.nodes.
    """

    grid: Grid
    u_plus: np.ndarray
    u_minus: np.ndarray

    def __post_init__(self):
        up = np.asarray(self.u_plus, dtype=float)
        um = np.asarray(self.u_minus, dtype=float)
        if up.shape != (self.grid.n_points,) or um.shape != (self.grid.n_points,):
            raise ValueError("field arrays must match grid.n_points")
        if not (np.all(np.isfinite(up)) and np.all(np.isfinite(um))):
            raise ValueError("Riemann fields contain non-finite values")
        if np.any(up - um < -1e-12):
            raise ValueError("u_plus < u_minus somewhere: modulus would be negative")
        object.__setattr__(self, "u_plus", up)
        object.__setattr__(self, "u_minus", um)

    @property
    def amplitude(self) -> np.ndarray:
        return 0.5 * (self.u_plus - self.u_minus)

    @property
    def phase_gradient(self) -> np.ndarray:
        return self.u_plus + self.u_minus


def riemann_invariants(spec: PotentialSpec, grid: Grid) -> RiemannFields:
    """Sample u_plus/u_minus = phase_gradient/2 +- |q| on the grid.

    Args:
        spec: potential family instance.
        grid: target grid; for Sampled specs it must coincide with the
            spec's own grid.

    Returns:
        RiemannFields on ``grid``.

    Raises:
        ValueError: non-finite samples, or Sampled grid mismatch.

    Warns if the modulus does not tend to 1 (or the phase gradient to 0)
    at the endpoints within 1e-6 — the operators downstream assume
    unit-modulus boundary behavior, but this is diagnostic, not fatal.
    """
    if isinstance(spec, Sampled):
        g = spec.grid
        if (
            g.n_points != grid.n_points
            or abs(g.half_width - grid.half_width) > 1e-12 * max(1.0, grid.half_width)
        ):
            raise ValueError("Sampled potential grid does not match the requested grid")
    amp = np.asarray(spec.amplitude_at(grid.nodes), dtype=float)
    pg = np.asarray(spec.phase_gradient_at(grid.nodes), dtype=float)
    if not (np.all(np.isfinite(amp)) and np.all(np.isfinite(pg))):
        raise ValueError("potential produced non-finite samples")
    for end in (0, -1):
        if abs(amp[end] - 1.0) > BOUNDARY_TOL or abs(pg[end]) > BOUNDARY_TOL:
            warnings.warn(
                f"potential does not reach unit modulus / zero phase gradient at "
                f"x = {grid.nodes[end]:+g} (|q| = {amp[end]:.6g}, phase' = {pg[end]:.3g}); "
                f"domain truncation may be inaccurate",
                stacklevel=2,
            )
            break
    return RiemannFields(grid=grid, u_plus=0.5 * pg + amp, u_minus=0.5 * pg - amp)


def part_norms(f: np.ndarray) -> tuple[float, float]:
    """Sup-norms of the positive and negative parts of a sampled field.

    Returns (sup f^+, sup f^-) = (max(0, max f), max(0, -min f)); both
    are >= 0 and at least one of them equals max|f|.
    """
    f = np.asarray(f, dtype=float)
    if f.size == 0:
        raise ValueError("part_norms of an empty array")
    if not np.all(np.isfinite(f)):
        raise ValueError("part_norms of non-finite data")
    return max(0.0, float(np.max(f))), max(0.0, float(-np.min(f)))


def gap_potential_V(fields: RiemannFields) -> np.ndarray:
    """Gap potential V = u_plus - 1 for the branch with u_minus == -1."""
    return fields.u_plus - 1.0


def mirrored_gap_potential(fields: RiemannFields) -> np.ndarray:
    """Mirrored gap potential -u_minus - 1 for the branch with u_plus == 1.

    The reflection (u_plus, u_minus, lambda) -> (-u_minus, -u_plus, -lambda)
    maps the u_plus == 1 branch onto the standard one; eigenvalues found
    with this potential are negated by the caller.
    """
    return -fields.u_minus - 1.0


def phase_profile(spec: PotentialSpec, grid: Grid, phase_left: float = 0.0) -> np.ndarray:
    """Phase phi at the grid nodes.

    Families with an explicit phase (PiecewiseConstantQ) return it
    verbatim; all others integrate the phase gradient by the trapezoid
    rule anchored at phi(-X) = phase_left.
    """
    if isinstance(spec, PiecewiseConstantQ):
        return spec.phase_at(grid.nodes) + phase_left
    pg = np.asarray(spec.phase_gradient_at(grid.nodes), dtype=float)
    phi = np.concatenate(([0.0], np.cumsum(0.5 * (pg[1:] + pg[:-1]) * grid.spacing)))
    return phi + phase_left


def aligned_grid(spec: PotentialSpec, half_width: float, n_points: int) -> Grid:
    """Grid of ~n_points nodes with every declared jump abscissa on a node.

    Spacing is snapped so that the jump points of ``spec`` (if any) and
    both endpoints are grid nodes; for jump-free families this is just
    Grid(half_width, n_points).
    """
    pts = [p for p in spec.segment_points() if -half_width < p < half_width]
    if not pts:
        return Grid(half_width, n_points)
    # choose h = 2X/(n-1) such that (p + X)/h is an integer for all jump points;
    # with rational jump points it is enough to refine n until max misalignment is tiny
    best = None
    for n in range(n_points, n_points + max(64, n_points // 16)):
        h = 2.0 * half_width / (n - 1)
        err = max(abs((p + half_width) / h - round((p + half_width) / h)) for p in pts)
        if best is None or err < best[0]:
            best = (err, n)
        if err < 1e-9:
            break
    return Grid(half_width, best[1])


# --- JSON round-trip -------------------------------------------------------
#
# {"family": "dark-soliton", "eps": 0.6}
# {"family": "square-well", "eps": 0.5}
# {"family": "piecewise-q",
#  "segments": [{"interval": [x_lo, x_hi], "amplitude": A, "phase": theta}, ...]}
# {"family": "sampled", "half_width": X,
#  "amplitude": [...], "phase_gradient": [...]}


def potential_from_json(text: str) -> PotentialSpec:
    """Parse a potential description; raises ValueError on malformed input."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"potential JSON is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict) or "family" not in obj:
        raise ValueError('potential JSON must be an object with a "family" key')
    fam = obj["family"]
    try:
        if fam == "dark-soliton":
            return DarkSoliton(eps=float(obj["eps"]))
        if fam == "square-well":
            return SquareWell(eps=float(obj["eps"]))
        if fam == "piecewise-q":
            segs = [
                Segment(
                    x_lo=float(s["interval"][0]),
                    x_hi=float(s["interval"][1]),
                    amplitude=float(s["amplitude"]),
                    phase=float(s.get("phase", 0.0)),
                )
                for s in obj["segments"]
            ]
            return PiecewiseConstantQ(segs)
        if fam == "sampled":
            amp = np.asarray(obj["amplitude"], dtype=float)
            grid = Grid(half_width=float(obj["half_width"]), n_points=len(amp))
            return Sampled(
                amplitude=amp,
                phase_gradient=np.asarray(obj["phase_gradient"], dtype=float),
                grid=grid,
            )
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        raise ValueError(f"malformed {fam!r} potential JSON: {exc}") from exc
    raise ValueError(f"unknown potential family {fam!r}")


def potential_to_json(spec: PotentialSpec) -> str:
    """Serialize a potential; inverse of potential_from_json."""
    if isinstance(spec, DarkSoliton):
        obj = {"family": "dark-soliton", "eps": spec.eps}
    elif isinstance(spec, SquareWell):
        obj = {"family": "square-well", "eps": spec.eps}
    elif isinstance(spec, PiecewiseConstantQ):
        obj = {
            "family": "piecewise-q",
            "segments": [
                {"interval": [s.x_lo, s.x_hi], "amplitude": s.amplitude, "phase": s.phase}
                for s in spec.segments
            ],
        }
    elif isinstance(spec, Sampled):
        obj = {
            "family": "sampled",
            "half_width": spec.grid.half_width,
            "amplitude": spec.amplitude.tolist(),
            "phase_gradient": spec.phase_gradient.tolist(),
        }
    else:
        raise TypeError(f"not a potential spec: {type(spec)!r}")
    return json.dumps(obj, sort_keys=True)
