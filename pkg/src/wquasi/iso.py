"""Isomorphism testing for two-generated tables.

A homomorphism out of a table generated by ``a, b`` is fixed by the images
of ``a`` and ``b``, so the search runs over ordered pairs of the target
rather than over permutations.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Optional

from .groupoid import CayleyTable, GeneratorContext, generated_set, is_one_step


class NotTwoGeneratedError(ValueError):
    pass


@dataclass(frozen=True)
class IsoResult:
    mapping: Optional[tuple[int, ...]]
    pairs_examined: int

    def __bool__(self) -> bool:
        return self.mapping is not None


def is_homomorphism(a: CayleyTable, b: CayleyTable, phi) -> bool:
    pa, pb = a.product, b.product
    n = a.order
    return all(phi[pa[x][y]] == pb[phi[x]][phi[y]] for x in range(n) for y in range(n))


def extend_pair(a: CayleyTable, b: CayleyTable, src: tuple[int, int], dst: tuple[int, int]) -> Optional[tuple[int, ...]]:
    """Extend ``src[i] -> dst[i]`` to an injective homomorphism, if one exists.

    ``src`` must generate ``a``; the returned map is checked on all pairs.
    """
    if a.order != b.order:
        return None
    pa, pb = a.product, b.product
    phi: dict[int, int] = {}
    used: set[int] = set()
    for s, d in zip(src, dst):
        if s in phi:
            if phi[s] != d:
                return None
            continue
        if d in used:
            return None
        phi[s] = d
        used.add(d)
    done: list[int] = []
    queue = list(phi)
    while queue:
        x = queue.pop(0)
        done.append(x)
        for y in done:
            for u, v in ((x, y), (y, x)):
                img = pb[phi[u]][phi[v]]
                prod = pa[u][v]
                if prod in phi:
                    if phi[prod] != img:
                        return None
                else:
                    if img in used:
                        return None
                    phi[prod] = img
                    used.add(img)
                    queue.append(prod)
    if len(phi) != a.order:
        return None
    mapping = tuple(phi[x] for x in range(a.order))
    return mapping if is_homomorphism(a, b, mapping) else None


def find_isomorphism(
    a: CayleyTable,
    b: CayleyTable,
    pointed: Optional[tuple[GeneratorContext, GeneratorContext]] = None,
) -> IsoResult:
    """Search for an isomorphism ``a -> b``; with ``pointed``, one sending e to e and f to f."""
    if a.order != b.order:
        return IsoResult(None, 0)
    if not is_one_step(a):
        raise NotTwoGeneratedError("the first table is not one-step, so pair search is not exhaustive")
    if pointed is not None:
        ca, cb = pointed
        return IsoResult(extend_pair(a, b, (ca.e, ca.f), (cb.e, cb.f)), 1)
    if a.order == 1:
        return IsoResult((0,), 1)
    src = (0, 1)
    examined = 0
    n = b.order
    for x in range(n):
        for y in range(n):
            if x == y:
                continue
            examined += 1
            phi = extend_pair(a, b, src, (x, y))
            if phi is not None:
                return IsoResult(phi, examined)
    return IsoResult(None, examined)


def pointed_isomorphism(a: CayleyTable, ctx_a: GeneratorContext, b: CayleyTable, ctx_b: GeneratorContext) -> IsoResult:
    """Pointed comparison that only needs ``ctx_a``'s pair to generate ``a``."""
    if a.order != b.order:
        return IsoResult(None, 0)
    if len(generated_set(a, (ctx_a.e, ctx_a.f))) != a.order:
        raise NotTwoGeneratedError("e and f do not generate the first table")
    return IsoResult(extend_pair(a, b, (ctx_a.e, ctx_a.f), (ctx_b.e, ctx_b.f)), 1)


def canonical_form(t: CayleyTable) -> tuple[tuple[int, ...], ...]:
    """Least relabelled product over all n! relabellings; small orders only."""
    n = t.order
    if n > 7:
        raise ValueError("canonical_form enumerates permutations; order must be at most 7")
    best = None
    p = t.product
    for perm in permutations(range(n)):
        inv = [0] * n
        for x, px in enumerate(perm):
            inv[px] = x
        cand = tuple(tuple(perm[p[inv[i]][inv[j]]] for j in range(n)) for i in range(n))
        if best is None or cand < best:
            best = cand
    return best
