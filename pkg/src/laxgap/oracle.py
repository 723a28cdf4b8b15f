"""Closed-form reference values for the two analytically solvable families.

Dark soliton: the single gap eigenvalue is -sqrt(1 - eps^2).

Square well of depth eps on a unit interval: the resolvent-compression
eigenvalues mu_j(beta) are -eps/(beta + kappa_j(k)^2) where k = sqrt(beta)
and kappa_j runs over the positive roots of tan(kappa) = 2*k*kappa /
(kappa^2 - k^2).  Roots are located on the pole-free reformulation

    g(kappa) = (kappa^2 - k^2) sin(kappa) - 2 k kappa cos(kappa) = 0,

which is entire in kappa (no tan poles, no kappa = k singularity), so dense
sampling plus sign-change bisection finds every root.  There is one root per
interval ((j-1)*pi, j*pi) for j >= 2, plus a root kappa_1 ~ sqrt(2k) that
escapes to 0 as k -> 0 — which is why mu_1 needs beta bounded away from zero
to evaluate stably.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["SquareWellRoots", "square_well_kappa", "square_well_mu", "dark_soliton_lambda"]

_SAMPLES_PER_PI = 10_000


@dataclass(frozen=True)
class SquareWellRoots:
    """First roots of the square-well matching equation at wavenumber k.

    kappas[j-1] = kappa_j(k), strictly increasing, kappa_j -> (j-1)*pi as
    k -> 0+.
    """

    k: float
    kappas: np.ndarray

    def __post_init__(self):
        ks = np.asarray(self.kappas, dtype=float)
        if ks.ndim != 1 or ks.size == 0:
            raise ValueError("kappas must be a non-empty 1-d array")
        if np.any(ks <= 0) or np.any(np.diff(ks) <= 0):
            raise ValueError("kappas must be positive and strictly increasing")
        object.__setattr__(self, "kappas", ks)


def _g(kappa, k: float):
    return (kappa**2 - k * k) * np.sin(kappa) - 2.0 * k * kappa * np.cos(kappa)


def square_well_kappa(k: float, j_max: int, tol: float = 1e-13) -> SquareWellRoots:
    """First j_max positive roots of g(kappa; k) by sampled bisection.

    Args:
        k: sqrt(beta) > 0.
        j_max: number of roots wanted (>= 1).
        tol: absolute bisection tolerance on each root.

    Returns:
        SquareWellRoots with kappas of shape (j_max,).

    Raises:
        ValueError: bad arguments.
        RuntimeError: fewer than j_max sign changes found in the search
            range (does not happen for k > 0 with the (j_max+2)*pi window).
    """
    if k <= 0 or not math.isfinite(k):
        raise ValueError(f"k must be positive and finite, got {k}")
    if j_max < 1:
        raise ValueError(f"j_max must be >= 1, got {j_max}")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    # one root per pi-interval past the first, so this window always holds
    # at least j_max sign changes; 1e4 samples per pi resolves kappa_1 ~ sqrt(2k)
    # down to k ~ 1e-8
    hi = (j_max + 2) * math.pi
    grid = np.linspace(1e-12, hi, int(_SAMPLES_PER_PI * hi / math.pi))
    vals = _g(grid, k)
    sign = np.sign(vals)
    idx = np.flatnonzero(sign[:-1] * sign[1:] < 0)
    roots = []
    for i in idx:
        lo_x, hi_x = float(grid[i]), float(grid[i + 1])
        flo = float(_g(lo_x, k))
        for _ in range(80):  # bounded: interval underflows float spacing before 80 halvings
            if hi_x - lo_x <= tol:
                break
            mid = 0.5 * (lo_x + hi_x)
            if mid <= lo_x or mid >= hi_x:
                break
            fm = float(_g(mid, k))
            if flo * fm <= 0:
                hi_x = mid
            else:
                lo_x, flo = mid, fm
        roots.append(0.5 * (lo_x + hi_x))
        if len(roots) == j_max:
            break
    if len(roots) < j_max:
        raise RuntimeError(
            f"found only {len(roots)} roots of the matching equation in (0, {hi:.6g}) "
            f"at k = {k:g}, wanted {j_max}"
        )
    return SquareWellRoots(k=k, kappas=np.array(roots))


def square_well_mu(eps: float, beta: float, j: int) -> float:
    """mu_j(beta) for the depth-eps unit square well: -eps/(beta + kappa_j^2).

    Args:
        eps: well depth in (0, 1].
        beta: shift parameter > 0.
        j: eigenvalue index (1-based).

    Raises:
        ValueError: for j == 1 with beta < 1e-10, where kappa_1 ~ (2*sqrt(beta))^(1/2)
            underflows the sampling resolution and mu_1 diverges to -infinity anyway;
            callers probing the beta -> 0 limit of mu_1 should use larger beta and
            extrapolate.
    """
    if not 0.0 < eps <= 1.0:
        raise ValueError(f"eps must be in (0, 1], got {eps}")
    if beta <= 0 or not math.isfinite(beta):
        raise ValueError(f"beta must be positive and finite, got {beta}")
    if j < 1:
        raise ValueError(f"j must be >= 1, got {j}")
    if j == 1 and beta < 1e-10:
        raise ValueError(
            f"mu_1 is not reliably computable at beta = {beta:g}: kappa_1 ~ "
            f"{math.sqrt(2.0 * math.sqrt(beta)):.2e} is below sampling resolution and "
            f"mu_1(beta) -> -inf as beta -> 0; use beta >= 1e-10 and extrapolate"
        )
    kappa = square_well_kappa(math.sqrt(beta), j).kappas[j - 1]
    return -eps / (beta + kappa * kappa)


def dark_soliton_lambda(eps: float) -> float:
    """The single gap eigenvalue -sqrt(1 - eps^2) of the dark soliton."""
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must be in (0, 1), got {eps}")
    return -math.sqrt(1.0 - eps * eps)
