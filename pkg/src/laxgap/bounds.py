"""Unconditional eigenvalue bounds and gap-exclusion certificates.

Any gap eigenvalue λ of the reduced operator must satisfy, for every real c,

    c − λ ≤ A(c) := ‖(u_minus + c)^(+)‖_∞   or
    c + λ ≤ B(c) := ‖(u_plus − c)^(−)‖_∞,

so each c excludes the open interval (B(c) − c, c − A(c)) when it is
nonempty.  These intervals are nested in c, hence the admissible set is the
complement of the widest one: a union of at most two closed rays.  When
u_plus ≥ c* and −u_minus ≥ c* hold at every node for some c* > 0, both
A(c*) and B(c*) vanish and the symmetric interval (−c*, c*) is certified
eigenvalue-free.

Sup-norms are taken over grid nodes; build grids with aligned_grid so that
jump discontinuities land on nodes and both one-sided values appear among
the samples.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .potential import RiemannFields, part_norms

__all__ = [
    "BoundCertificate",
    "default_c_grid",
    "evaluate_bounds",
    "check_eigenvalues",
]

C_GRID_SIZE = 101
PASS_SLACK = 1e-12


@dataclass(frozen=True)
class BoundCertificate:
    """Per-c bound values and the certified symmetric exclusion interval.

    left_bound[i] = A(c_i), right_bound[i] = B(c_i); exclusion is (−c*, c*)
    with the largest admissible c*, or None when no positive c* exists.
    """

    c_values: np.ndarray
    left_bound: np.ndarray
    right_bound: np.ndarray
    exclusion: Optional[tuple[float, float]]

    def __post_init__(self):
        c = np.asarray(self.c_values, dtype=float)
        a = np.asarray(self.left_bound, dtype=float)
        b = np.asarray(self.right_bound, dtype=float)
        if not (c.shape == a.shape == b.shape) or c.ndim != 1 or c.size == 0:
            raise ValueError("c_values, left_bound, right_bound must be equal-length 1d arrays")
        if np.any(a < 0) or np.any(b < 0):
            raise ValueError("bound values are sup-norms and cannot be negative")
        if self.exclusion is not None:
            lo, hi = self.exclusion
            if not (lo < 0 < hi and abs(lo + hi) < 1e-14):
                raise ValueError(f"exclusion must be symmetric about 0, got {self.exclusion}")
        object.__setattr__(self, "c_values", c)
        object.__setattr__(self, "left_bound", a)
        object.__setattr__(self, "right_bound", b)

    def admissible(self) -> tuple[tuple[float, float], ...]:
        """Admissible-λ set as closed rays (the whole line when nothing is excluded)."""
        lo = self.right_bound - self.c_values  # exclusion interval starts
        hi = self.c_values - self.left_bound   # exclusion interval ends
        width = hi - lo
        k = int(np.argmax(width))
        if width[k] <= 0:
            return ((-np.inf, np.inf),)
        return ((-np.inf, float(lo[k])), (float(hi[k]), np.inf))


def default_c_grid(fields: RiemannFields) -> np.ndarray:
    """101 uniform c values over [0, 1 + sup|u_plus|]."""
    top = 1.0 + float(np.max(np.abs(fields.u_plus)))
    return np.linspace(0.0, top, C_GRID_SIZE)


def evaluate_bounds(fields: RiemannFields,
                    c_values: Optional[np.ndarray] = None) -> BoundCertificate:
    """Evaluate A(c), B(c) over a c sweep and certify any symmetric exclusion.

    Args:
        fields: Riemann invariants on a grid (jump-aligned for exact sups).
        c_values: evaluation levels; defaults to default_c_grid(fields).

    Returns:
        BoundCertificate; exclusion = (−c*, c*) with
        c* = min(min u_plus, −max u_minus) when that is positive.
    """
    if c_values is None:
        c_values = default_c_grid(fields)
    c = np.asarray(c_values, dtype=float)
    if c.ndim != 1 or c.size == 0 or not np.all(np.isfinite(c)):
        raise ValueError("c_values must be a non-empty finite 1d array")
    a = np.empty(c.size)
    b = np.empty(c.size)
    for i, ci in enumerate(c):
        a[i] = part_norms(fields.u_minus + ci)[0]
        b[i] = part_norms(fields.u_plus - ci)[1]
    c_star = min(float(np.min(fields.u_plus)), -float(np.max(fields.u_minus)))
    exclusion = (-c_star, c_star) if c_star > 0 else None
    return BoundCertificate(c_values=c, left_bound=a, right_bound=b, exclusion=exclusion)


def check_eigenvalues(cert: BoundCertificate, lambdas) -> np.ndarray:
    """Test computed eigenvalues against every recorded c level.

    Args:
        cert: certificate from evaluate_bounds on the same fields.
        lambdas: eigenvalues to test.

    Returns:
        boolean array: entry k is True iff for every c,
        c − λ_k ≤ A(c) or c + λ_k ≤ B(c) (with 1e-12 slack).  A False entry
        flags an inconsistency between the solver and the bound.
    """
    lam = np.atleast_1d(np.asarray(lambdas, dtype=float))
    out = np.empty(lam.size, dtype=bool)
    c = cert.c_values
    for k, l in enumerate(lam):
        ok_left = c - l <= cert.left_bound + PASS_SLACK
        ok_right = c + l <= cert.right_bound + PASS_SLACK
        out[k] = bool(np.all(ok_left | ok_right))
    return out
