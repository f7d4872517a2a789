"""The dimension of a two-generated table: the shortest word in f and ef equal to e."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .groupoid import CayleyTable, GeneratorContext, is_latin, is_one_step
from .word import F, G, Word


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class DimensionReport:
    value: int
    witness: Word
    per_pair: Optional[dict] = None


@dataclass(frozen=True)
class AllPairsReport:
    per_pair: dict[tuple[int, int], int] = field(repr=False)
    minimum: int
    maximum: int

    @property
    def uniform(self) -> bool:
        return self.minimum == self.maximum


def _levels_until(a: np.ndarray, f: int, g: int, target: int, cap: int):
    """Grow levels L_1, L_2, ... until ``target`` appears.

    Returns (k, derivations) where derivations[k][x] = (i, left, right)
    is the first derivation of x at level k in (left level, left index,
    right index) order.
    """
    n = a.shape[0]
    levels: list[Optional[np.ndarray]] = [None, np.unique(np.array([f, g]))]
    deriv: list[dict] = [{}, {}]
    if target in (f, g):
        return 1, deriv
    for k in range(2, cap + 1):
        found: dict[int, tuple[int, int, int]] = {}
        for i in range(1, k):
            left, right = levels[i], levels[k - i]
            block = a[np.ix_(left, right)]
            vals, first = np.unique(block.ravel(), return_index=True)
            for v, pos in zip(vals.tolist(), first.tolist()):
                if v not in found:
                    found[v] = (i, int(left[pos // right.size]), int(right[pos % right.size]))
            if len(found) == n:
                break
        levels.append(np.array(sorted(found), dtype=np.int64))
        deriv.append(found)
        if target in found:
            return k, deriv
    raise DimensionError(f"e not reached within {cap} levels; the pair does not generate")


def _rebuild(deriv, k: int, x: int, f: int, g: int) -> Word:
    if k == 1:
        return F if x == f else G
    i, left, right = deriv[k][x]
    return Word.pair(_rebuild(deriv, i, left, f, g), _rebuild(deriv, k - i, right, f, g))


def dimension(t: CayleyTable, ctx: GeneratorContext) -> DimensionReport:
    if not is_latin(t):
        raise DimensionError("dimension needs a Latin square")
    ctx.check(t)
    if ctx.g == ctx.h:
        raise DimensionError("e and f commute")
    cap = t.order ** 2
    k, deriv = _levels_until(t.array, ctx.f, ctx.g, ctx.e, cap)
    if k == 1:
        raise DimensionError("e equals f or ef; the table cannot be cancellative and two-generated")
    return DimensionReport(k, _rebuild(deriv, k, ctx.e, ctx.f, ctx.g))


def dimension_all_pairs(t: CayleyTable) -> AllPairsReport:
    """Dimension with respect to every ordered pair of distinct elements."""
    if t.order < 2:
        raise DimensionError("no pair of distinct elements")
    if not is_one_step(t):
        raise DimensionError("per-pair dimension needs a one-step table")
    per_pair = {}
    for e in range(t.order):
        for f in range(t.order):
            if e != f:
                per_pair[(e, f)] = dimension(t, GeneratorContext.from_table(t, e, f)).value
    vals = per_pair.values()
    return AllPairsReport(per_pair, min(vals), max(vals))
