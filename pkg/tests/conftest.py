"""Shared fixtures: the frozen potential corpus and helpers to sample it.

The corpus in data/v_corpus.json is a fixed set of compactly supported
quartic-bump sums V(x) = sum_k a_k * (1 - t^2)^2, t = (x - c_k)/w_k, with
sup|V| <= 0.9 and support inside |x| <= 10.  Each entry records whether
V <= 0 everywhere and the exact integral of V (16/15 * sum a_k w_k).
"""
import json
import pathlib

import numpy as np
import pytest

from laxgap.potential import Grid, Sampled

DATA_DIR = pathlib.Path(__file__).parent / "data"

CORPUS_HALF_WIDTH = 30.0
CORPUS_POINTS = 3001  # h = 0.02 reference grid


def load_corpus():
    with open(DATA_DIR / "v_corpus.json") as fh:
        payload = json.load(fh)
    return payload["entries"]


def bump_sum(x, terms):
    """Evaluate sum of quartic bumps a*(1-t^2)^2 restricted to |t| < 1."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for term in terms:
        t = (x - term["center"]) / term["width"]
        mask = np.abs(t) < 1.0
        out[mask] += term["amplitude"] * (1.0 - t[mask] ** 2) ** 2
    return out


def corpus_potential(entry, grid):
    """Realize a corpus entry as a minus-branch potential on ``grid``.

    Choosing amplitude 1 + V/2 and phase gradient V gives
    u_minus = V/2 - (1 + V/2) = -1 exactly and u_plus = V/2 + (1 + V/2)
    = 1 + V, so the operator potential u_plus - 1 equals V with no branch
    defect.  (sup|V| <= 0.9 keeps the amplitude positive.)
    """
    x = grid.nodes
    v = bump_sum(x, entry["terms"])
    return Sampled(amplitude=1.0 + 0.5 * v, phase_gradient=v, grid=grid)


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


@pytest.fixture(scope="session")
def corpus_grid():
    return Grid(CORPUS_HALF_WIDTH, CORPUS_POINTS)
