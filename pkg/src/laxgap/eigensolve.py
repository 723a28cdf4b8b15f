"""Self-contained symmetric/Hermitian eigenvalue kernels.

Three problem classes, all solved by Sturm-style inertia counting +
bisection isolation + inverse iteration:

* real symmetric tridiagonal matrices (``SymTridiag``),
* the generalized symmetric-definite pencil B u = mu A u with tridiagonal
  positive-definite A and diagonal B (``GenEigProblem``),
* Hermitian banded matrices in upper LAPACK storage (the 2x2-block Dirac
  discretizations).

Everything is deterministic: fixed trigonometric start vectors for inverse
iteration, bisection to fixed tolerances, no randomness.  Inertia counts
come from unpivoted LDL^* sweeps whose pivots are floored at +-1e-300
(sign-preserving) on breakdown — the standard Sturm-bisection safeguard;
a miscount would need a bisection midpoint to collide with an eigenvalue
to ~1e-300, which the midpoint arithmetic never produces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np
from scipy.linalg import solve_banded

__all__ = [
    "SymTridiag",
    "GenEigProblem",
    "sturm_count",
    "eig_interval",
    "gen_negative_eigs",
    "hermitian_band_count_below",
    "hermitian_band_eig_interval",
    "hermitian_band_matvec",
    "band_to_dense",
]

PIVOT_FLOOR = 1e-300


@dataclass(frozen=True)
class SymTridiag:
    """Real symmetric tridiagonal matrix: diag (length n), offdiag (length n-1)."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.ascontiguousarray(self.diag, dtype=float)
        e = np.ascontiguousarray(self.offdiag, dtype=float)
        if d.ndim != 1 or d.size == 0:
            raise ValueError("diag must be a non-empty 1-d array")
        if e.shape != (d.size - 1,):
            raise ValueError(f"offdiag must have length {d.size - 1}, got {e.shape}")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
            raise ValueError("non-finite matrix entries")
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def n(self) -> int:
        return self.diag.size

    def norm_inf(self) -> float:
        d, e = np.abs(self.diag), np.abs(self.offdiag)
        row = d.copy()
        if e.size:
            row[:-1] += e
            row[1:] += e
        return float(np.max(row))

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diag * v
        if self.offdiag.size:
            out[:-1] += self.offdiag * v[1:]
            out[1:] += self.offdiag * v[:-1]
        return out

    def gershgorin(self) -> tuple[float, float]:
        d, e = self.diag, np.abs(self.offdiag)
        r = np.zeros_like(d)
        if e.size:
            r[:-1] += e
            r[1:] += e
        return float(np.min(d - r)), float(np.max(d + r))


@dataclass(frozen=True)
class GenEigProblem:
    """Pencil B u = mu A u: A = stiffness (tridiagonal SPD), B = diag(mass_like)."""

    stiffness: SymTridiag
    mass_like: np.ndarray

    def __post_init__(self):
        b = np.ascontiguousarray(self.mass_like, dtype=float)
        if b.shape != (self.stiffness.n,):
            raise ValueError(
                f"mass_like must have length {self.stiffness.n}, got {b.shape}"
            )
        if not np.all(np.isfinite(b)):
            raise ValueError("non-finite mass_like entries")
        object.__setattr__(self, "mass_like", b)
        if sturm_count(self.stiffness, 0.0) != 0:
            raise ValueError(
                "stiffness matrix is not positive definite (beta <= 0 or assembly bug)"
            )

    def count_below(self, sigma: float) -> int:
        """Number of pencil eigenvalues mu strictly below sigma (Sylvester inertia)."""
        return int(
            _count_pencil(
                self.mass_like,
                self.stiffness.diag,
                self.stiffness.offdiag,
                float(sigma),
                PIVOT_FLOOR,
            )
        )


# --- inertia-count kernels --------------------------------------------------


@numba.njit(cache=True)
def _count_tridiag(d, e, shift, floor):
    # pivots of LDL^T of (T - shift*I); count of negatives = eigenvalues < shift
    n = d.shape[0]
    count = 0
    prev = 1.0
    for i in range(n):
        x = d[i] - shift
        if i > 0:
            x -= e[i - 1] * e[i - 1] / prev
        if abs(x) < floor:
            x = -floor if x < 0.0 else floor
        if x < 0.0:
            count += 1
        prev = x
    return count


@numba.njit(cache=True)
def _count_pencil(bd, ad, ae, sigma, floor):
    # pivots of (B - sigma*A): diagonal bd - sigma*ad, offdiagonal -sigma*ae;
    # for A > 0 the negative-pivot count equals #{mu_j < sigma} by Sylvester
    # inertia; exact-zero pivots (nodes with V == 0 at sigma == 0) are ties,
    # not below, so they tie-break positive
    n = bd.shape[0]
    count = 0
    prev = 1.0
    for i in range(n):
        x = bd[i] - sigma * ad[i]
        if i > 0:
            off = -sigma * ae[i - 1]
            x -= off * off / prev
        if abs(x) < floor:
            x = -floor if x < 0.0 else floor
        if x < 0.0:
            count += 1
        prev = x
    return count


@numba.njit(cache=True)
def _count_hband(ab, shift, floor):
    # ab: Hermitian banded, upper storage, ab[b - d, j] = A[j - d, j];
    # in-place-on-copy banded LDL^* of (A - shift*I), counting negative pivots
    b1, n = ab.shape
    b = b1 - 1
    w = ab.copy()
    for j in range(n):
        w[b, j] = w[b, j] - shift
    count = 0
    for kcol in range(n):
        d = w[b, kcol].real
        if abs(d) < floor:
            d = -floor if d < 0.0 else floor
        if d < 0.0:
            count += 1
        kmax = min(b, n - 1 - kcol)
        for i in range(1, kmax + 1):
            aki = w[b - i, kcol + i]
            li = np.conj(aki) / d
            for j in range(i, kmax + 1):
                akj = w[b - j, kcol + j]
                w[b - (j - i), kcol + j] = w[b - (j - i), kcol + j] - li * akj
    return count


def sturm_count(t: SymTridiag, x: float) -> int:
    """Number of eigenvalues of t strictly less than x."""
    if not math.isfinite(x):
        raise ValueError(f"shift must be finite, got {x}")
    return int(_count_tridiag(t.diag, t.offdiag, float(x), PIVOT_FLOOR))


def hermitian_band_count_below(ab: np.ndarray, x: float) -> int:
    """Eigenvalues strictly below x of a Hermitian matrix in upper banded storage."""
    if not math.isfinite(x):
        raise ValueError(f"shift must be finite, got {x}")
    return int(_count_hband(np.ascontiguousarray(ab, dtype=complex), float(x), PIVOT_FLOOR))


# --- banded helpers ----------------------------------------------------------


def hermitian_band_matvec(ab: np.ndarray, v: np.ndarray) -> np.ndarray:
    """A @ v for Hermitian A in upper banded storage ab[b-d, j] = A[j-d, j]."""
    b = ab.shape[0] - 1
    n = ab.shape[1]
    out = ab[b] * v
    for d in range(1, b + 1):
        out[: n - d] += ab[b - d, d:] * v[d:]
        out[d:] += np.conj(ab[b - d, d:]) * v[: n - d]
    return out


def band_to_dense(ab: np.ndarray) -> np.ndarray:
    """Materialize the full Hermitian matrix from upper banded storage."""
    b = ab.shape[0] - 1
    n = ab.shape[1]
    a = np.zeros((n, n), dtype=complex)
    for d in range(b + 1):
        idx = np.arange(n - d)
        a[idx, idx + d] = ab[b - d, d:]
        if d:
            a[idx + d, idx] = np.conj(ab[b - d, d:])
    return a


def _band_lu_form(ab: np.ndarray) -> np.ndarray:
    # expand upper Hermitian storage to the (2b+1, n) form solve_banded expects
    b = ab.shape[0] - 1
    n = ab.shape[1]
    full = np.zeros((2 * b + 1, n), dtype=complex)
    full[: b + 1] = ab
    for d in range(1, b + 1):
        full[b + d, : n - d] = np.conj(ab[b - d, d:])
    return full


# --- bisection isolation ------------------------------------------------------


def _isolate(count, lo: float, hi: float, atol: float):
    """Cluster eigenvalues of a counting function into (midpoint, multiplicity)."""
    clusters = []
    clo, chi = count(lo), count(hi)
    stack = [(lo, clo, hi, chi)]
    while stack:
        a, ca, b, cb = stack.pop()
        if cb == ca:
            continue
        if b - a <= atol:
            clusters.append((0.5 * (a + b), cb - ca))
            continue
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:  # interval has collapsed to float resolution
            clusters.append((mid, cb - ca))
            continue
        cm = count(mid)
        stack.append((a, ca, mid, cm))
        stack.append((mid, cm, b, cb))
    clusters.sort()
    return clusters


def _start_vector(n: int, s: int) -> np.ndarray:
    i = np.arange(1, n + 1, dtype=float)
    return np.sin((0.37 + 0.219 * s) * i) + 0.1 * np.cos((0.11 + 0.07 * s) * i)


# --- tridiagonal interval eigensolve -----------------------------------------


def _tridiag_solve(d, e, sigma, rhs):
    n = d.size
    ab = np.zeros((3, n))
    ab[1] = d - sigma
    if n > 1:
        ab[0, 1:] = e
        ab[2, :-1] = e
    return solve_banded((1, 1), ab, rhs)


def eig_interval(t: SymTridiag, lo: float, hi: float, tol: float = 1e-10):
    """All eigenvalues of t in (lo, hi) with eigenvectors.

    Bisection on the Sturm count isolates eigenvalues to absolute accuracy
    tol; inverse iteration (deterministic start vectors, Gram-Schmidt inside
    degenerate clusters) supplies vectors, refined by Rayleigh quotients.

    Returns:
        list of (value, vector) sorted by value ascending; vectors are
        2-norm-normalized with residual ||T v - value v|| <= 1e3 * tol * ||T||.

    Raises:
        RuntimeError: inverse iteration failed the residual bound within 50
            sweeps (with shift/residual diagnostics).
    """
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    d, e = t.diag, t.offdiag
    norm_t = t.norm_inf()
    res_bound = 1e3 * tol * max(norm_t, 1e-30)
    out = []
    for sigma, mult in _isolate(lambda x: sturm_count(t, x), lo, hi, tol):
        vecs: list[np.ndarray] = []
        for s in range(mult):
            v = _start_vector(t.n, s)
            v /= np.linalg.norm(v)
            lam, res = sigma, math.inf
            shift = sigma + 3.17e-3 * tol  # keep the solve off exact singularity
            for sweep in range(50):
                try:
                    w = _tridiag_solve(d, e, shift, v)
                except np.linalg.LinAlgError:
                    shift += tol * (sweep + 1)
                    continue
                for u in vecs:
                    w -= (u @ w) * u
                nw = np.linalg.norm(w)
                if not np.isfinite(nw) or nw < 1e-280:
                    v = _start_vector(t.n, s + 7 * (sweep + 1))
                    v /= np.linalg.norm(v)
                    continue
                v = w / nw
                av = t.matvec(v)
                lam = float(v @ av)
                res = float(np.linalg.norm(av - lam * v))
                if res <= res_bound:
                    break
            else:
                raise RuntimeError(
                    f"inverse iteration did not converge: shift={sigma:.16g}, "
                    f"multiplicity={mult}, residual={res:.3e} > bound={res_bound:.3e}"
                )
            vecs.append(v)
            out.append((lam, v))
    out.sort(key=lambda p: p[0])
    return out


# --- generalized pencil -------------------------------------------------------


def gen_negative_eigs(p: GenEigProblem, j_max: int, tol: float = 1e-8):
    """The j_max most negative eigenvalues of B u = mu A u (fewer if fewer exist).

    Eigenvalues are isolated by bisection on the Sylvester inertia count of
    B - sigma*A, then solved by shifted inverse iteration on the pencil
    (A-orthogonalized inside clusters) and refined by the generalized
    Rayleigh quotient.

    Returns:
        list of (mu, vector) sorted by |mu| descending (mu ascending: all are
        negative); vectors 2-norm-normalized with
        ||B u - mu A u|| <= tol * (||B|| + |mu| ||A||) * ||u||.

    Raises:
        RuntimeError: bracket search or inverse iteration failure.
    """
    if j_max < 1:
        raise ValueError(f"j_max must be >= 1, got {j_max}")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    a, bd = p.stiffness, p.mass_like
    n_neg = p.count_below(0.0)
    if n_neg == 0:
        return []
    lo = -1.0
    for _ in range(200):
        if p.count_below(lo) == 0:
            break
        lo *= 2.0
    else:
        raise RuntimeError("no finite lower bracket for pencil eigenvalues (A near-singular?)")
    atol = tol * max(1.0, -lo)
    norm_a = a.norm_inf()
    norm_b = float(np.max(np.abs(bd)))
    clusters = _isolate(p.count_below, lo, 0.0, atol)
    out = []
    for sigma, mult in clusters:
        if len(out) >= j_max:
            break
        vecs: list[np.ndarray] = []
        for s in range(mult):
            if len(out) >= j_max:
                break
            v = _start_vector(a.n, s)
            v /= np.linalg.norm(v)
            mu, res = sigma, math.inf
            shift = sigma + 3.17e-3 * atol
            res_bound = math.inf
            for sweep in range(50):
                # pencil inverse iteration: w = (B - shift*A)^{-1} (A v)
                try:
                    w = _pencil_solve(bd, a, shift, a.matvec(v))
                except np.linalg.LinAlgError:
                    shift += atol * (sweep + 1)
                    continue
                for u in vecs:
                    w -= (u @ a.matvec(w)) / (u @ a.matvec(u)) * u
                nw = np.linalg.norm(w)
                if not np.isfinite(nw) or nw < 1e-280:
                    v = _start_vector(a.n, s + 7 * (sweep + 1))
                    v /= np.linalg.norm(v)
                    continue
                v = w / nw
                av = a.matvec(v)
                mu = float((bd * v) @ v / (av @ v))
                res = float(np.linalg.norm(bd * v - mu * av))
                res_bound = tol * (norm_b + abs(mu) * norm_a)
                if res <= res_bound:
                    break
            else:
                raise RuntimeError(
                    f"pencil inverse iteration did not converge: shift={sigma:.16g}, "
                    f"multiplicity={mult}, residual={res:.3e} > bound={res_bound:.3e}"
                )
            vecs.append(v)
            out.append((mu, v))
    out.sort(key=lambda t_: t_[0])
    return out[:j_max]


def _pencil_solve(bd, a: SymTridiag, sigma, rhs):
    n = bd.size
    ab = np.zeros((3, n))
    ab[1] = bd - sigma * a.diag
    if n > 1:
        ab[0, 1:] = -sigma * a.offdiag
        ab[2, :-1] = -sigma * a.offdiag
    return solve_banded((1, 1), ab, rhs)


# --- Hermitian banded interval eigensolve --------------------------------------


def hermitian_band_eig_interval(ab: np.ndarray, lo: float, hi: float, tol: float = 1e-10):
    """All eigenvalues in (lo, hi) of a Hermitian matrix in upper banded storage.

    Same strategy as eig_interval, with banded LDL^* inertia counts and
    solve_banded-based inverse iteration.

    Returns:
        list of (value, vector) ascending; vectors 2-norm-normalized,
        residual <= 1e3 * tol * ||A||_inf.
    """
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    ab = np.ascontiguousarray(ab, dtype=complex)
    b = ab.shape[0] - 1
    n = ab.shape[1]
    row = np.abs(ab[b]).astype(float)
    for d in range(1, b + 1):
        row[: n - d] += np.abs(ab[b - d, d:])
        row[d:] += np.abs(ab[b - d, d:])
    norm_a = float(np.max(row)) if n else 0.0
    res_bound = 1e3 * tol * max(norm_a, 1e-30)
    lu = _band_lu_form(ab)
    out = []
    for sigma, mult in _isolate(lambda x: hermitian_band_count_below(ab, x), lo, hi, tol):
        vecs: list[np.ndarray] = []
        for s in range(mult):
            v = _start_vector(n, s).astype(complex)
            v /= np.linalg.norm(v)
            lam, res = sigma, math.inf
            shift = sigma + 3.17e-3 * tol
            for sweep in range(50):
                m = lu.copy()
                m[b, :] -= shift
                try:
                    w = solve_banded((b, b), m, v)
                except np.linalg.LinAlgError:
                    shift += tol * (sweep + 1)
                    continue
                for u in vecs:
                    w -= (np.conj(u) @ w) * u
                nw = np.linalg.norm(w)
                if not np.isfinite(nw) or nw < 1e-280:
                    v = _start_vector(n, s + 7 * (sweep + 1)).astype(complex)
                    v /= np.linalg.norm(v)
                    continue
                v = w / nw
                av = hermitian_band_matvec(ab, v)
                lam = float((np.conj(v) @ av).real)
                res = float(np.linalg.norm(av - lam * v))
                if res <= res_bound:
                    break
            else:
                raise RuntimeError(
                    f"banded inverse iteration did not converge: shift={sigma:.16g}, "
                    f"multiplicity={mult}, residual={res:.3e} > bound={res_bound:.3e}"
                )
            vecs.append(v)
            out.append((lam, v))
    out.sort(key=lambda p: p[0])
    return out
