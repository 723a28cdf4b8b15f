"""Figure rendering for CLI reports.

All functions write PNG files and return the path; they never open windows
(Agg backend) and never alter global matplotlib state beyond the backend
selection at import time.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .bounds import BoundCertificate  # noqa: E402
from .potential import Grid  # noqa: E402

__all__ = ["plot_spinor", "plot_mu_curves", "plot_bounds"]

_DPI = 130


def plot_spinor(path: str, grid: Grid, comp1: np.ndarray, comp2: np.ndarray,
                lam: float, title: str) -> str:
    """Component magnitudes of one eigenvector over the grid."""
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    ax.plot(grid.nodes, np.abs(comp1), label=r"$|\Psi_1|$")
    ax.plot(grid.nodes, np.abs(comp2), label=r"$|\Psi_2|$", linestyle="--")
    ax.set_xlabel("x")
    ax.set_ylabel("component magnitude")
    ax.set_title(f"{title}  (lambda = {lam:.6f})")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def plot_mu_curves(path: str, betas: np.ndarray, mu_rows: dict[int, np.ndarray],
                   title: str) -> str:
    """Eigenvalue curves beta -> mu_j(beta), one line per index j.

    NaN entries (index unavailable at that beta) break the line.
    """
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    for j in sorted(mu_rows):
        ax.plot(betas, mu_rows[j], marker=".", label=f"j = {j}")
    ax.set_xscale("log")
    ax.set_xlabel(r"$\beta$")
    ax.set_ylabel(r"$\mu_j(\beta)$")
    ax.axhline(-0.5, color="k", linewidth=0.8, linestyle=":", alpha=0.6)
    ax.set_title(title)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def plot_bounds(path: str, cert: BoundCertificate, lambdas, title: str) -> str:
    """A(c) and B(c) profiles with the computed eigenvalues marked."""
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    c = cert.c_values
    ax.plot(c, c - cert.left_bound, label=r"$c - A(c)$")
    ax.plot(c, cert.right_bound - c, label=r"$B(c) - c$", linestyle="--")
    lam = np.atleast_1d(np.asarray(lambdas, dtype=float))
    for k, l in enumerate(lam):
        ax.axhline(l, color="crimson", linewidth=0.8, alpha=0.7,
                   label="eigenvalues" if k == 0 else None)
    if cert.exclusion is not None:
        ax.axhspan(cert.exclusion[0], cert.exclusion[1], color="gray", alpha=0.15,
                   label="certified exclusion")
    ax.set_xlabel("c")
    ax.set_ylabel(r"$\lambda$")
    ax.set_title(title)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path
