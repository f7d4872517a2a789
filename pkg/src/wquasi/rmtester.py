"""Random spot checks of right modularity on a fixed table.

The table is held fixed and triples (x, y, z) are drawn uniformly with
replacement; one draw detects a violation with probability p, the exact
fraction of violating triples, so k draws detect one with 1 - (1 - p)^k.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .groupoid import CayleyTable, count_rm_violations

PROBABILITY_MODEL = "table fixed; triples drawn uniformly with replacement"


@dataclass(frozen=True)
class SamplePlan:
    samples: int
    seed: int
    swaps: int = 0

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be at least 1")
        if self.swaps < 0:
            raise ValueError("swaps must be non-negative")


@dataclass(frozen=True)
class SampleResult:
    samples: int
    violations: int
    estimate: float
    exact_fraction: float
    exact_count: int

    @property
    def detected(self) -> bool:
        return self.violations > 0


@dataclass(frozen=True)
class CurvePoint:
    k: int
    predicted: float
    empirical: float
    trials: int

    @property
    def sigma(self) -> float:
        return math.sqrt(self.predicted * (1 - self.predicted) / self.trials)

    @property
    def within_3_sigma(self) -> bool:
        tol = 3 * self.sigma
        if tol == 0:
            return self.empirical == self.predicted
        return abs(self.empirical - self.predicted) <= tol


def perturb(t: CayleyTable, swaps: int, rng: np.random.Generator) -> CayleyTable:
    """Swap two off-diagonal entries of one row, ``swaps`` times."""
    n = t.order
    if swaps and n < 3:
        raise ValueError("need order at least 3 to swap off-diagonal entries")
    rows = [list(r) for r in t.product]
    for _ in range(swaps):
        x = int(rng.integers(n))
        cols = [c for c in range(n) if c != x]
        i, j = rng.choice(len(cols), size=2, replace=False)
        a, b = cols[int(i)], cols[int(j)]
        rows[x][a], rows[x][b] = rows[x][b], rows[x][a]
    return CayleyTable.from_rows(rows, t.labels)


def swap_entries(t: CayleyTable, row: int, a: int, b: int) -> CayleyTable:
    rows = [list(r) for r in t.product]
    rows[row][a], rows[row][b] = rows[row][b], rows[row][a]
    return CayleyTable.from_rows(rows, t.labels)


def _violating_mask(t: CayleyTable) -> np.ndarray:
    a = t.array
    r = np.arange(t.order)
    x, y, z = r[:, None, None], r[None, :, None], r[None, None, :]
    return a[a[x, y], z] != a[a[z, y], x]


def sample_rm(t: CayleyTable, plan: SamplePlan) -> SampleResult:
    """Draw ``plan.samples`` triples and compare with the exact count.

    ``plan.swaps`` is ignored here; perturb the table first with ``perturb``.
    """
    rng = np.random.default_rng(plan.seed)
    n = t.order
    triples = rng.integers(n, size=(plan.samples, 3))
    mask = _violating_mask(t)
    hits = int(mask[triples[:, 0], triples[:, 1], triples[:, 2]].sum())
    exact = count_rm_violations(t)
    return SampleResult(plan.samples, hits, hits / plan.samples, exact / n**3, exact)


def detection_curve(t: CayleyTable, ks, trials: int, seed: int) -> list[CurvePoint]:
    """Predicted vs empirical detection rate for each k.

    Trial ``i`` at each k uses a generator seeded from ``SeedSequence(seed)``
    child ``i``, so the result does not depend on evaluation order.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    n = t.order
    mask = _violating_mask(t)
    p = count_rm_violations(t) / n**3
    children = np.random.SeedSequence(seed).spawn(trials)
    out = []
    for k in ks:
        if k < 1:
            raise ValueError("k must be at least 1")
        detected = 0
        for child in children:
            rng = np.random.default_rng([k, *child.generate_state(2)])
            tr = rng.integers(n, size=(k, 3))
            if mask[tr[:, 0], tr[:, 1], tr[:, 2]].any():
                detected += 1
        out.append(CurvePoint(k, 1 - (1 - p) ** k, detected / trials, trials))
    return out
