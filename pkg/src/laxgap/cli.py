"""Command-line orchestration: run methods, cross-validate, emit reports.

Exit codes:
    0 — run completed and every internal consistency check passed;
    2 — configuration error (bad flags, malformed potential file);
    3 — numerical failure, with the failing module named on stderr, or a
        consistency check that did not pass.

The JSON report is deterministic for a fixed configuration except for the
"timings" map, which carries wall-clock measurements; consumers that diff
reports should drop that key.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bounds import check_eigenvalues, default_c_grid, evaluate_bounds
from .gap import gap_eigenvalues, gap_report
from .kbeta import J_MAX_DEFAULT, kbeta_spectrum, write_sweep_csv
from .oracle import dark_soliton_lambda, square_well_kappa
from .potential import (
    Branch,
    DarkSoliton,
    Grid,
    PiecewiseConstantQ,
    PotentialSpec,
    SquareWell,
    aligned_grid,
    gap_potential_V,
    mirrored_gap_potential,
    potential_from_json,
    potential_to_json,
    riemann_invariants,
)
from .transform import filtered_gap_spectrum

__all__ = ["RunConfig", "run", "main"]

METHODS = ("kbeta-pipeline", "direct-dirac", "direct-calL", "bounds", "oracle-compare")
BUILTINS = ("dark-soliton", "square-well", "free")
CROSS_METHOD_TOL = 5e-3
SWEEP_BETAS = tuple(float(b) for b in np.geomspace(1e-3, 1.0, 25))

_METHOD_MODULE = {
    "kbeta-pipeline": "gap/kbeta",
    "direct-dirac": "transform/eigensolve",
    "direct-calL": "transform/eigensolve",
    "bounds": "bounds",
    "oracle-compare": "oracle",
}


class ConfigError(Exception):
    """Invalid run configuration (maps to exit code 2)."""


class ModuleFailure(Exception):
    """Numerical failure inside one module (maps to exit code 3)."""

    def __init__(self, module: str, cause: BaseException):
        super().__init__(f"numerical failure in module {module}: {cause}")
        self.module = module
        self.cause = cause


@dataclass(frozen=True)
class RunConfig:
    """Validated description of one end-to-end run."""

    potential: PotentialSpec
    half_width: float
    n_points: int
    methods: tuple
    tolerances: dict
    output_path: str
    branch: Branch = Branch.U_MINUS_IS_MINUS_ONE
    csv_sweep: Optional[str] = None
    figures: bool = True

    def __post_init__(self):
        if self.n_points % 2 == 0:
            raise ConfigError(
                f"n_points must be odd for a grid symmetric about 0, got {self.n_points}"
            )
        if self.n_points < 17:
            raise ConfigError(f"n_points too small for assembly: {self.n_points}")
        if not self.half_width > 0:
            raise ConfigError(f"half_width must be positive, got {self.half_width}")
        if not self.methods:
            raise ConfigError("methods must be non-empty")
        bad = [m for m in self.methods if m not in METHODS]
        if bad:
            raise ConfigError(f"unknown methods {bad}; choose from {list(METHODS)}")


def _grid_for(config: RunConfig) -> Grid:
    return aligned_grid(config.potential, config.half_width, config.n_points)


def _branch_potential(fields, branch: Branch) -> np.ndarray:
    if branch is Branch.U_MINUS_IS_MINUS_ONE:
        return gap_potential_V(fields)
    return mirrored_gap_potential(fields)


def _spinor_components(vector: np.ndarray, grid: Grid) -> tuple[np.ndarray, np.ndarray]:
    """Interleaved interior eigenvector -> normalized full-grid components."""
    c1 = np.zeros(grid.n_points, dtype=complex)
    c2 = np.zeros(grid.n_points, dtype=complex)
    c1[1:-1] = vector[0::2]
    c2[1:-1] = vector[1::2]
    scale = math.sqrt(grid.spacing) * float(
        np.linalg.norm(np.concatenate((c1, c2)))
    )
    return c1 / scale, c2 / scale


def _oracle_reference(config: RunConfig) -> tuple[Optional[list], str]:
    """Analytic gap eigenvalues for the builtin families, if known."""
    spec = config.potential
    if isinstance(spec, DarkSoliton):
        return [dark_soliton_lambda(spec.eps)], "dark-soliton closed form"
    if isinstance(spec, SquareWell):
        lam = -math.sqrt(1.0 - _square_well_beta1(spec.eps))
        return [lam], "square-well transcendental roots"
    if isinstance(spec, PiecewiseConstantQ) and not spec.segments:
        return [], "free potential (empty point spectrum in the gap)"
    return None, "no analytic reference for this potential family"


def _square_well_beta1(eps: float) -> float:
    """Continuum fixed point: (beta + kappa_1(sqrt(beta))^2)/eps = 1 + sqrt(1-beta)."""

    def f(beta: float) -> float:
        kap = square_well_kappa(math.sqrt(beta), 1).kappas[0]
        return (beta + kap * kap) / eps - 1.0 - math.sqrt(1.0 - beta)

    lo, hi = 1e-9, 1.0 - 1e-12
    if f(hi) < 0:
        raise ArithmeticError("square-well fixed point escaped (0, 1]")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _run_method(name: str, fn):
    try:
        t0 = time.perf_counter()
        out = fn()
        return out, time.perf_counter() - t0
    except (ArithmeticError, RuntimeError, ValueError, np.linalg.LinAlgError) as exc:
        raise ModuleFailure(_METHOD_MODULE[name], exc) from exc


def run(config: RunConfig) -> tuple[dict, bool]:
    """Execute the configured methods and assemble the report.

    Returns:
        (report dict, all_checks_passed).  Numerical failures raise
        ModuleFailure naming the module; the caller maps that to exit 3.
    """
    grid = _grid_for(config)
    fields = riemann_invariants(config.potential, grid)
    pipeline_tol = float(config.tolerances.get("pipeline", 1e-8))
    direct_tol = float(config.tolerances.get("direct", 1e-10))

    results: dict = {}
    timings: dict = {}
    lambda_sets: dict[str, list[float]] = {}

    if "kbeta-pipeline" in config.methods:
        def do_pipeline():
            pairs = gap_eigenvalues(config.potential, grid, config.branch,
                                    tol=pipeline_tol)
            V = _branch_potential(fields, config.branch)
            tail = max(abs(float(V[0])), abs(float(V[-1])))
            caveat = None
            if tail > 1e-6:
                caveat = (
                    "potential tail |V| = %.3e at the domain ends; truncation error "
                    "is not controlled for slowly decaying potentials" % tail
                )
            return pairs, gap_report(config.branch, pairs, truncation_caveat=caveat)

        (pairs, rep), timings["kbeta-pipeline"] = _run_method("kbeta-pipeline", do_pipeline)
        results["kbeta-pipeline"] = rep
        lambda_sets["kbeta-pipeline"] = [p.lambda_j for p in pairs]
        results["kbeta-pipeline"]["count"] = len(pairs)
    else:
        pairs = []

    direct_modes: dict[str, list] = {}
    for method, op in (("direct-dirac", "L"), ("direct-calL", "calL")):
        if method not in config.methods:
            continue

        def do_direct(op=op):
            return filtered_gap_spectrum(config.potential, grid, operator=op,
                                         tol=direct_tol)

        modes, timings[method] = _run_method(method, do_direct)
        direct_modes[method] = modes
        lambda_sets[method] = sorted((m.value for m in modes), reverse=True)
        results[method] = {
            "count": len(modes),
            "eigenvalues": [
                {
                    "lambda": float(m.value),
                    "refined_lambda": float(m.refined_value),
                    "drift": float(m.drift),
                    "boundary_mass": float(m.boundary_mass),
                    "smoothness": float(m.smooth_fraction_sq),
                }
                for m in modes
            ],
            "refinement": {
                "coarse_spacing": grid.spacing,
                "drift_limit": 10.0 * grid.spacing**2,
                "max_drift": max((float(m.drift) for m in modes), default=0.0),
            },
        }

    cert = None
    if "bounds" in config.methods:
        def do_bounds():
            return evaluate_bounds(fields, default_c_grid(fields))

        cert, timings["bounds"] = _run_method("bounds", do_bounds)
        results["bounds"] = {
            "c_values": [float(c) for c in cert.c_values],
            "left_bound": [float(a) for a in cert.left_bound],
            "right_bound": [float(b) for b in cert.right_bound],
            "exclusion": list(cert.exclusion) if cert.exclusion else None,
            "admissible": [[float(a), float(b)] for a, b in cert.admissible()],
        }

    oracle_ref = None
    if "oracle-compare" in config.methods:
        def do_oracle():
            return _oracle_reference(config)

        (oracle_ref, oracle_note), timings["oracle-compare"] = _run_method(
            "oracle-compare", do_oracle)
        results["oracle-compare"] = {
            "reference": oracle_ref,
            "note": oracle_note,
        }

    # --- consistency checks -------------------------------------------------
    checks: list[dict] = []
    producing = [m for m in ("kbeta-pipeline", "direct-dirac", "direct-calL")
                 if m in lambda_sets]
    for i in range(len(producing)):
        for k in range(i + 1, len(producing)):
            a, b = producing[i], producing[k]
            la, lb = lambda_sets[a], lambda_sets[b]
            if len(la) != len(lb):
                checks.append({"name": f"cross-method({a},{b})", "pass": False,
                               "detail": f"counts differ: {len(la)} vs {len(lb)}"})
                continue
            delta = max((abs(x - y) for x, y in zip(la, lb)), default=0.0)
            checks.append({"name": f"cross-method({a},{b})", "pass": delta <= CROSS_METHOD_TOL,
                           "detail": f"max |delta| = {delta:.3e}"})

    if oracle_ref is not None:
        ref = sorted(oracle_ref, reverse=True)
        for m in producing:
            lm = lambda_sets[m]
            if len(lm) != len(ref):
                checks.append({"name": f"oracle-compare({m})", "pass": False,
                               "detail": f"counts differ: {len(lm)} vs {len(ref)}"})
                continue
            delta = max((abs(x - y) for x, y in zip(lm, ref)), default=0.0)
            checks.append({"name": f"oracle-compare({m})", "pass": delta <= CROSS_METHOD_TOL,
                           "detail": f"max |delta| = {delta:.3e}"})

    if cert is not None:
        for m, lams in lambda_sets.items():
            verdicts = check_eigenvalues(cert, lams) if lams else np.ones(0, dtype=bool)
            results["bounds"].setdefault("verdicts", {})[m] = [bool(v) for v in verdicts]
            checks.append({"name": f"bounds-pass({m})", "pass": bool(np.all(verdicts)),
                           "detail": f"{int(np.sum(verdicts))}/{verdicts.size} eigenvalues pass"})

    all_pass = all(c["pass"] for c in checks)
    report = {
        "schema_version": 1,
        "config": {
            "potential": json.loads(potential_to_json(config.potential)),
            "half_width": config.half_width,
            "n_points": config.n_points,
            "realized_grid": {"n_points": grid.n_points, "spacing": grid.spacing},
            "methods": list(config.methods),
            "tolerances": {k: float(v) for k, v in sorted(config.tolerances.items())},
            "branch": config.branch.value,
            "output_path": config.output_path,
        },
        "results": results,
        "consistency": {"checks": checks, "all_pass": all_pass},
        "timings": {k: round(v, 6) for k, v in timings.items()},
    }
    _write_artifacts(config, grid, report, pairs, direct_modes, cert, lambda_sets)
    return report, all_pass


def _write_artifacts(config, grid, report, pairs, direct_modes, cert, lambda_sets):
    out = config.output_path
    stem = out[:-5] if out.endswith(".json") else out
    with open(out, "w") as fh:
        json.dump(report, fh, sort_keys=True, indent=2)
        fh.write("\n")

    spinors = []
    if pairs:
        spinors = [(p.j, p.spinor.comp1, p.spinor.comp2, p.lambda_j) for p in pairs]
    elif direct_modes:
        best = max(direct_modes.items(), key=lambda kv: len(kv[1]))[1]
        for idx, m in enumerate(best, start=1):
            c1, c2 = _spinor_components(m.vector, grid)
            spinors.append((idx, c1, c2, m.value))
    for j, c1, c2, lam in spinors:
        path = f"{stem}_spinor_j{j}.csv"
        with open(path, "w") as fh:
            fh.write("x,abs_psi1,abs_psi2\n")
            for x, a, b in zip(grid.nodes, np.abs(c1), np.abs(c2)):
                fh.write(f"{float(x)!r},{float(a)!r},{float(b)!r}\n")

    sweep_data = None
    if config.csv_sweep:
        fields = riemann_invariants(config.potential, grid)
        V = _branch_potential(fields, config.branch)
        write_sweep_csv(config.csv_sweep, V, grid, np.array(SWEEP_BETAS),
                        j_max=J_MAX_DEFAULT,
                        tol=float(config.tolerances.get("pipeline", 1e-8)))
        sweep_data = (np.array(SWEEP_BETAS), V)

    if config.figures:
        from . import plots

        for j, c1, c2, lam in spinors[:4]:
            plots.plot_spinor(f"{stem}_spinor_j{j}.png", grid, c1, c2, lam,
                              title=f"eigenvector j={j}")
        if cert is not None:
            all_lams = sorted({l for ls in lambda_sets.values() for l in ls})
            plots.plot_bounds(f"{stem}_bounds.png", cert, all_lams,
                              title="eigenvalue bounds sweep")
        if sweep_data is not None:
            betas, V = sweep_data
            rows: dict[int, list] = {}
            for b in betas:
                spec_b = kbeta_spectrum(V, grid, float(b), j_max=J_MAX_DEFAULT,
                                        tol=float(config.tolerances.get("pipeline", 1e-8)))
                for j in range(1, J_MAX_DEFAULT + 1):
                    rows.setdefault(j, []).append(
                        float(spec_b.mus[j - 1]) if len(spec_b.mus) >= j else np.nan)
            mu_rows = {j: np.array(v) for j, v in rows.items()
                       if np.any(np.isfinite(v))}
            if mu_rows:
                plots.plot_mu_curves(f"{stem}_mu_curves.png", betas, mu_rows,
                                     title="pencil eigenvalue curves")


def _build_potential(args) -> PotentialSpec:
    name = args.potential
    if name == "dark-soliton":
        return DarkSoliton(eps=args.eps)
    if name == "square-well":
        return SquareWell(eps=args.eps)
    if name == "free":
        return PiecewiseConstantQ(segments=())
    try:
        with open(name) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read potential file {name!r}: {exc}") from exc
    try:
        return potential_from_json(text)
    except (ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"malformed potential file {name!r}: {exc}") from exc


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="laxgap",
        description="Gap eigenvalues of the reduced Dirac operator for "
                    "non-vanishing potentials: fixed-point pipeline, direct "
                    "discretizations, bounds, and analytic cross-checks.",
    )
    p.add_argument("--potential", required=True,
                   help=f"builtin name {BUILTINS} or path to a potential JSON file")
    p.add_argument("--eps", type=float, default=0.5,
                   help="parameter for the builtin families (default 0.5)")
    p.add_argument("--half-width", type=float, default=40.0,
                   help="domain half-width X (default 40)")
    p.add_argument("--points", type=int, default=8001,
                   help="grid points, odd (default 8001)")
    p.add_argument("--method", action="append", choices=METHODS, default=None,
                   help="method to run; repeatable (default: kbeta-pipeline bounds)")
    p.add_argument("--tol", type=float, default=1e-8,
                   help="pipeline eigensolver tolerance (default 1e-8)")
    p.add_argument("--branch", choices=[b.value for b in Branch],
                   default=Branch.U_MINUS_IS_MINUS_ONE.value,
                   help="which Riemann invariant is constant (pipeline only)")
    p.add_argument("--out", default="laxgap_report.json",
                   help="report path (default laxgap_report.json)")
    p.add_argument("--csv-sweep", default=None, metavar="PATH",
                   help="also write a (beta, j, mu_j) sweep CSV to PATH")
    p.add_argument("--no-figures", action="store_true",
                   help="skip PNG rendering next to the report")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        potential = _build_potential(args)
        methods = tuple(args.method) if args.method else ("kbeta-pipeline", "bounds")
        config = RunConfig(
            potential=potential,
            half_width=args.half_width,
            n_points=args.points,
            methods=methods,
            tolerances={"pipeline": args.tol, "direct": 1e-10},
            output_path=args.out,
            branch=Branch(args.branch),
            csv_sweep=args.csv_sweep,
            figures=not args.no_figures,
        )
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2

    try:
        report, all_pass = run(config)
    except ModuleFailure as exc:
        print(str(exc), file=sys.stderr)
        return 3
    if not all_pass:
        failed = [c["name"] for c in report["consistency"]["checks"] if not c["pass"]]
        print(f"consistency checks failed: {', '.join(failed)}", file=sys.stderr)
        return 3
    print(f"report written to {config.output_path}; all consistency checks pass")
    return 0


if __name__ == "__main__":
    sys.exit(main())
