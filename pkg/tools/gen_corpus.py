"""Generate the fixed-seed potential corpus shipped at tests/data/v_corpus.json.

Each entry is a sum of compactly supported quartic bumps

    V(x) = sum_i  a_i * (1 - t_i^2)^2,   t_i = (x - c_i) / w_i,  |t_i| <= 1,

with supports inside [-10, 10] and sup|V| <= 0.9 (the pipeline smallness
region).  Half of the entries are non-positive (so the integral of V is
negative and the zero-shift divergence trend applies to them).

Entries are acceptance-filtered so the shipped corpus is well-conditioned
for the property checks: at beta = 1 on the reference grid the pencil has a
full slate of 8 negative eigenvalues, all below -1e-6, which keeps counts
stable across beta sweeps far above the 1e-9 noise floor.

Run from the repository root:  python3 tools/gen_corpus.py
"""

import json
import pathlib

import numpy as np

from laxgap.kbeta import kbeta_spectrum
from laxgap.potential import Grid

SEED = 20260814
N_ENTRIES = 20
HALF_WIDTH = 30.0
REF_POINTS = 3001


def bump_sum(x, terms):
    v = np.zeros_like(x, dtype=float)
    for t in terms:
        s = (x - t["center"]) / t["width"]
        mask = np.abs(s) < 1.0
        v[mask] += t["amplitude"] * (1.0 - s[mask] ** 2) ** 2
    return v


def draw_entry(rng, nonpositive):
    n_terms = int(rng.integers(1, 4))
    terms = []
    # dominant well: wide and decidedly negative
    terms.append({
        "center": float(np.round(rng.uniform(-4.0, 4.0), 6)),
        "width": float(np.round(rng.uniform(3.0, 6.0), 6)),
        "amplitude": float(np.round(rng.uniform(-0.85, -0.35), 6)),
    })
    for _ in range(n_terms - 1):
        lo, hi = (-0.45, -0.05) if nonpositive else (-0.45, 0.45)
        terms.append({
            "center": float(np.round(rng.uniform(-7.0, 7.0), 6)),
            "width": float(np.round(rng.uniform(1.0, 3.5), 6)),
            "amplitude": float(np.round(rng.uniform(lo, hi), 6)),
        })
    return terms


def acceptable(terms):
    grid = Grid(half_width=HALF_WIDTH, n_points=REF_POINTS)
    v = bump_sum(grid.nodes, terms)
    if np.max(np.abs(v)) > 0.9 or -np.min(v) < 0.2:
        return False
    if np.max(np.abs(v[np.abs(grid.nodes) > 10.0])) > 0:
        return False
    spec = kbeta_spectrum(v, grid, 1.0, j_max=8)
    # full slate of comfortably negative eigenvalues at the top of the sweep
    return len(spec.mus) == 8 and spec.mus[-1] < -1e-6


def main():
    rng = np.random.default_rng(SEED)
    entries = []
    k = 0
    while len(entries) < N_ENTRIES:
        nonpositive = len(entries) % 2 == 0
        terms = draw_entry(rng, nonpositive)
        k += 1
        if not acceptable(terms):
            continue
        integral = sum(t["amplitude"] * t["width"] * 16.0 / 15.0 for t in terms)
        entries.append({
            "name": f"corpus-{len(entries) + 1:02d}",
            "terms": terms,
            "nonpositive": nonpositive,
            "integral": integral,
        })
    out = {
        "seed": SEED,
        "half_width": HALF_WIDTH,
        "form": "sum of a*(1-((x-c)/w)^2)^2 on |x-c|<w, zero elsewhere",
        "entries": entries,
    }
    path = pathlib.Path(__file__).resolve().parents[1] / "tests" / "data" / "v_corpus.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(out, indent=2, sort_keys=True) + "\n")
    print(f"wrote {path} ({len(entries)} entries, {k} draws)")


if __name__ == "__main__":
    main()
