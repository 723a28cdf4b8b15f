"""Gap eigenvalues via the fixed-point reduction.

When one Riemann invariant is constant (u_minus ≡ −1, or u_plus ≡ 1 for the
mirrored case) the two-component eigenvalue problem collapses to a scalar
pencil V φ = μ (−φ'' + β φ) coupled to its own spectral parameter through
β = 1 − λ².  Writing α_j(β) = −1/μ_j(β), each gap eigenvalue corresponds to
the unique root β_j of

    f_j(β) = α_j(β) − 1 − √(1−β) = 0   on (0, 1],

which exists precisely when lim_{β→0} μ_j(β) < −1/2 (certification) and the
negative part of the potential does not exceed the gap half-width
(sup V^(−) ≤ 1).  Then λ_j = 1 + 1/μ_j(β_j), the second spinor component is
the scalar eigenfunction φ, and Ψ₁ = i ∂ₓφ / (λ + u_minus).

The mirrored branch (u_plus ≡ 1) is solved by running the same pipeline on
Ṽ = −u_minus − 1 and negating the resulting eigenvalues; the spinor
components swap roles: Ψ₁ = φ, Ψ₂ = i ∂ₓφ / (λ + u_plus).

Root finding is bisection in s = √(1−β); f is strictly increasing in β, so
g(s) = f(1−s²) is strictly decreasing and bisection terminates on the
function value |f| ≤ tol/2 itself, which makes the fixed-point identity
error |β − (1−λ²)| = |f|·|2√(1−β)+f| ≈ 2|f| at most ~tol even where f is
steep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .kbeta import J_MAX_DEFAULT, NZeroReport, kbeta_spectrum, n_zero_set
from .potential import (
    Branch,
    Grid,
    PotentialSpec,
    RiemannFields,
    gap_potential_V,
    mirrored_gap_potential,
    part_norms,
    riemann_invariants,
)
from .transform import SpinorField, assemble_calL

__all__ = [
    "GapEigenpair",
    "solve_beta_j",
    "gap_eigenvalues",
    "reconstruct_spinor",
    "gap_report",
]

BRANCH_TOL = 1e-8
DENOMINATOR_FLOOR = 1e-8
BETA_FLOOR = 1e-12
BETA_TOL_DEFAULT = 1e-12


@dataclass(frozen=True)
class GapEigenpair:
    """One gap eigenvalue with its scalar-problem data and spinor."""

    j: int
    beta_j: float
    mu_j_at_beta_j: float
    lambda_j: float
    spinor: SpinorField
    residual: float

    def __post_init__(self):
        if not 0.0 < self.beta_j <= 1.0:
            raise ValueError(f"beta_j must lie in (0, 1], got {self.beta_j}")
        if not self.mu_j_at_beta_j < 0.0:
            raise ValueError(f"mu_j_at_beta_j must be negative, got {self.mu_j_at_beta_j}")
        if not -1.0 < self.lambda_j < 1.0:
            raise ValueError(f"lambda_j must lie in (-1, 1), got {self.lambda_j}")
        # fixed-point identities; the solver drives |f| <= tol/2 so the error
        # here is ~tol, with headroom for the mu evaluation noise floor
        if abs(self.beta_j - (1.0 - self.lambda_j**2)) > 1e-10:
            raise ValueError("fixed-point identity beta = 1 - lambda^2 violated")
        lam = 1.0 + 1.0 / self.mu_j_at_beta_j
        # mirrored-branch pairs store the negated eigenvalue, hence the +/-
        if min(abs(self.lambda_j - lam), abs(self.lambda_j + lam)) > 1e-10:
            raise ValueError("identity lambda = +/-(1 + 1/mu) violated")


def solve_beta_j(mu_of_beta: Callable[[float], float], tol: float = BETA_TOL_DEFAULT,
                 beta_start: float = 0.5) -> float:
    """Root of f(β) = −1/μ(β) − 1 − √(1−β) on (0, 1] by monotone bisection.

    Args:
        mu_of_beta: handle returning the (negative) pencil eigenvalue μ_j(β);
            must be strictly increasing in β.  Evaluations at repeated β
            should be cheap — callers cache them.
        tol: target residual |f| at the accepted root.
        beta_start: upper probe for the walk-down that finds a point with
            f < 0 (use the certification probe from n_zero_set).

    Returns:
        β_j with |f(β_j)| ≤ tol/2 when the evaluation noise of mu_of_beta
        permits (otherwise the probe with the smallest |f| seen); the
        fixed-point identity error |β − (1−λ²)| = |f|·|2√(1−β)+f| is then
        ≤ ~tol directly, independent of the slope of f.  β_j = 1.0 exactly
        when |f(1)| ≤ tol.

    Raises:
        ArithmeticError: f(1) < −tol (α_j(1) < 1: the potential's negative
            part exceeds the gap half-width, or discretization error), or
            f stays ≥ 0 all the way down to β = 1e-12 (the index is not in
            the certified set, or the starting probe is too large).
    """

    def f(beta: float) -> float:
        mu = mu_of_beta(beta)
        if not mu < 0.0:
            raise ArithmeticError(f"mu_of_beta({beta}) = {mu} is not negative")
        return -1.0 / mu - 1.0 - math.sqrt(max(1.0 - beta, 0.0))

    f_one = f(1.0)
    if f_one < -tol:
        raise ArithmeticError(
            "f(1) < 0, i.e. alpha(1) < 1: negative part of the potential exceeds 1 "
            f"(the gap half-width) or discretization error; f(1) = {f_one:.3e}"
        )
    if abs(f_one) <= tol:
        return 1.0

    # walk down from the certification probe until f < 0 brackets the root
    b = min(beta_start, 1.0 - tol)
    fb = f(b)
    while fb >= 0.0:
        b *= 0.5
        if b < BETA_FLOOR:
            raise ArithmeticError(
                "f(beta) >= 0 down to beta = 1e-12: no sign change, the index is not "
                "certified (not in the zero-limit negative set) or the starting probe "
                "is too large"
            )
        fb = f(b)

    # bisect in s = sqrt(1-beta): g(s) = f(1-s^2) is strictly decreasing, so
    # the midpoints home in on the root; terminating on |f| (not bracket
    # width) keeps the identity error ~tol even where f is steep
    s_lo, s_hi = 0.0, math.sqrt(1.0 - b)  # g(s_lo) > 0 > g(s_hi)
    s_best, f_best = s_hi, fb
    target = 0.5 * tol
    for _ in range(200):
        s_mid = 0.5 * (s_lo + s_hi)
        if s_mid <= s_lo or s_mid >= s_hi:
            break  # bracket collapsed to float resolution: f is noise-limited
        fm = f(1.0 - s_mid * s_mid)
        if abs(fm) < abs(f_best):
            s_best, f_best = s_mid, fm
        if abs(fm) <= target:
            break
        if fm > 0.0:
            s_lo = s_mid
        else:
            s_hi = s_mid
    return 1.0 - s_best * s_best


def _central_difference(phi: np.ndarray, h: float) -> np.ndarray:
    d = np.zeros_like(phi)
    d[1:-1] = (phi[2:] - phi[:-2]) / (2.0 * h)
    return d


def reconstruct_spinor(phi: np.ndarray, lam: float, fields: RiemannFields,
                       branch: Branch) -> tuple[SpinorField, float]:
    """Rebuild the two-component eigenvector from the scalar eigenfunction.

    For branch U_MINUS_IS_MINUS_ONE: Ψ₂ = φ and Ψ₁ = i ∂ₓφ / (λ + u_minus);
    for U_PLUS_IS_ONE the components swap: Ψ₁ = φ, Ψ₂ = i ∂ₓφ / (λ + u_plus).
    ∂ₓφ is the central difference; the spinor is normalized to unit discrete
    L² norm.

    Args:
        phi: scalar eigenfunction on the full grid (zero at the ends).
        lam: gap eigenvalue.
        fields: Riemann invariants on the same grid.
        branch: which invariant is constant.

    Returns:
        (spinor, residual) with residual = ‖ℒΨ − λΨ‖ / ‖Ψ‖ evaluated through
        the assembled banded operator on interior nodes.
    """
    phi = np.asarray(phi, dtype=complex)
    grid = fields.grid
    if phi.shape != (grid.n_points,):
        raise ValueError("phi must be sampled on the full grid")
    if not np.any(phi != 0):
        raise ValueError("reconstruction requires a nonzero scalar eigenfunction")
    if branch is Branch.U_MINUS_IS_MINUS_ONE:
        denom = lam + fields.u_minus
    else:
        denom = lam + fields.u_plus
    worst = float(np.min(np.abs(denom)))
    if worst < DENOMINATOR_FLOOR:
        raise ValueError(
            f"reconstruction formula invalid: min |lambda + u| = {worst:.3e} < 1e-08"
        )
    dphi = _central_difference(phi, grid.spacing)
    other = 1j * dphi / denom
    if branch is Branch.U_MINUS_IS_MINUS_ONE:
        comp1, comp2 = other, phi
    else:
        comp1, comp2 = phi, other

    op = assemble_calL(fields)
    z = np.empty(2 * (grid.n_points - 2), dtype=complex)
    z[0::2] = comp1[1:-1]
    z[1::2] = comp2[1:-1]
    znorm = float(np.linalg.norm(z))
    resid = float(np.linalg.norm(op.matvec(z) - lam * z)) / znorm

    scale = math.sqrt(grid.spacing) * float(
        np.linalg.norm(np.concatenate((comp1, comp2)))
    )
    spinor = SpinorField(grid=grid, comp1=comp1 / scale, comp2=comp2 / scale)
    return spinor, resid


class _MuCache:
    """Per-potential cache of pencil spectra keyed by β (single-threaded use;
    concurrent solvers should partition one cache per index j)."""

    def __init__(self, V: np.ndarray, grid: Grid, j_max: int, tol: float):
        self.V = V
        self.grid = grid
        self.j_max = j_max
        self.tol = tol
        self._store: dict[float, object] = {}

    def spectrum(self, beta: float):
        key = float(beta)
        if key not in self._store:
            self._store[key] = kbeta_spectrum(self.V, self.grid, key,
                                              j_max=self.j_max, tol=self.tol)
        return self._store[key]

    def mu(self, j: int, beta: float) -> float:
        spec = self.spectrum(beta)
        if len(spec.mus) < j:
            raise ArithmeticError(
                f"mu_{j}({beta}) unavailable: only {len(spec.mus)} negative "
                "pencil eigenvalues at this beta"
            )
        return float(spec.mus[j - 1])


def gap_eigenvalues(spec: PotentialSpec, grid: Grid, branch: Branch,
                    tol: float = 1e-8, j_max: int = J_MAX_DEFAULT,
                    beta_tol: float = BETA_TOL_DEFAULT,
                    report: Optional[NZeroReport] = None) -> list[GapEigenpair]:
    """All gap eigenvalues of the reduced operator on a constant-invariant branch.

    Certifies the admissible index set (zero-limit probes of the pencil),
    solves the fixed-point equation for each certified j, and reconstructs
    the spinors.  Eigenvalue evaluations are cached per β across indices.

    Args:
        spec: potential family.
        grid: sampling grid; jumps must be node-aligned.
        branch: U_MINUS_IS_MINUS_ONE (solve with V = u_plus − 1) or
            U_PLUS_IS_ONE (solve with Ṽ = −u_minus − 1 and negate λ).
        tol: eigensolver tolerance.
        j_max: largest index probed.
        beta_tol: target fixed-point residual |f| when refining each β_j.
        report: pre-computed certification to reuse (skips the probe sweep).

    Returns:
        list of GapEigenpair sorted with λ non-increasing.

    Raises:
        ValueError: branch precondition or smallness condition violated.
        ArithmeticError: propagated solver failures.
    """
    fields = riemann_invariants(spec, grid)
    if branch is Branch.U_MINUS_IS_MINUS_ONE:
        defect = float(np.max(np.abs(fields.u_minus + 1.0)))
        label = "u_minus + 1"
        V = gap_potential_V(fields)
        sign = 1.0
    elif branch is Branch.U_PLUS_IS_ONE:
        defect = float(np.max(np.abs(fields.u_plus - 1.0)))
        label = "u_plus - 1"
        V = mirrored_gap_potential(fields)
        sign = -1.0
    else:
        raise ValueError(f"unknown branch {branch!r}")
    if defect > BRANCH_TOL:
        raise ValueError(
            f"branch precondition violated: max|{label}| = {defect:.3e} > 1e-08 "
            "(the branch's Riemann invariant must be constant on the grid)"
        )
    v_neg = part_norms(V)[1]
    if v_neg > 1.0:
        raise ValueError(
            "smallness condition violated: sup of the negative part of the "
            f"potential = {v_neg:.6f} > 1, the spectral-gap half-width"
        )
    if v_neg == 0.0:
        return []

    if report is None:
        report = n_zero_set(V, grid, j_max=j_max, tol=tol)
    if not report.indices:
        return []
    # root refinement needs mu to much better than the bisection width, or the
    # fixed-point identity drowns in eigensolver noise; certification above
    # only needs sign information and keeps the caller's tolerance
    cache = _MuCache(V, grid, j_max=j_max, tol=min(tol, 1e-11))

    pairs: list[GapEigenpair] = []
    prev_beta = math.inf
    for j in report.indices:
        beta_j = solve_beta_j(lambda b, jj=j: cache.mu(jj, b), tol=beta_tol,
                              beta_start=report.certification_beta[j])
        mu_at = cache.mu(j, beta_j)
        alpha = -1.0 / mu_at
        if not alpha >= 1.0 - 1e-9:
            raise ArithmeticError(
                f"root selection failed: alpha_{j}(beta_{j}) = {alpha:.12f} < 1"
            )
        if not beta_j <= prev_beta + beta_tol:
            raise ArithmeticError("beta_j failed to be non-increasing in j")
        prev_beta = beta_j
        lam = sign * (1.0 + 1.0 / mu_at)
        phi = cache.spectrum(beta_j).vectors[:, j - 1]
        spinor, resid = reconstruct_spinor(phi, lam, fields, branch)
        pairs.append(GapEigenpair(j=j, beta_j=beta_j, mu_j_at_beta_j=mu_at,
                                  lambda_j=lam, spinor=spinor, residual=resid))
    pairs.sort(key=lambda p: -p.lambda_j)
    return pairs


def gap_report(branch: Branch, pairs: list[GapEigenpair],
               bounds_check=None, truncation_caveat: Optional[str] = None) -> dict:
    """Plain-dict form of a pipeline run, ready for JSON serialization."""
    return {
        "branch": branch.value,
        "eigenvalues": [
            {
                "j": p.j,
                "lambda": p.lambda_j,
                "beta": p.beta_j,
                "mu": p.mu_j_at_beta_j,
                "residual": p.residual,
            }
            for p in pairs
        ],
        "bounds_check": bounds_check,
        "truncation_caveat": truncation_caveat,
    }
