"""Finite groupoids given by Cayley tables, and the checks run against them."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

IDENTITY_NAMES = (
    "idempotent",
    "right_modular",
    "medial",
    "left_distributive",
    "right_distributive",
    "elastic",
    "latin_square",
    "nowhere_commutative",
)


class TableError(ValueError):
    pass


@dataclass(frozen=True)
class CayleyTable:
    """An order-n groupoid on 0..n-1; ``product[x][y]`` is x*y."""

    product: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.product)
        object.__setattr__(self, "product", rows)
        n = len(rows)
        if n == 0:
            raise TableError("a table needs at least one element")
        for i, row in enumerate(rows):
            if len(row) != n:
                raise TableError(f"row {i} has {len(row)} entries, expected {n}")
            for j, v in enumerate(row):
                if not 0 <= v < n:
                    raise TableError(f"entry ({i}, {j}) = {v} is not an element index")
        labels = tuple(self.labels) or tuple(str(i) for i in range(n))
        if len(labels) != n:
            raise TableError(f"{len(labels)} labels for order {n}")
        if len(set(labels)) != n:
            raise TableError("labels must be unique")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], labels: Sequence[str] = ()) -> "CayleyTable":
        return cls(tuple(tuple(r) for r in rows), tuple(labels))

    @property
    def order(self) -> int:
        return len(self.product)

    def __len__(self) -> int:
        return self.order

    def mul(self, x: int, y: int) -> int:
        return self.product[x][y]

    @cached_property
    def array(self) -> np.ndarray:
        a = np.array(self.product, dtype=np.int64)
        a.setflags(write=False)
        return a

    def label(self, x: int) -> str:
        return self.labels[x]

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def relabel(self, perm: Sequence[int]) -> "CayleyTable":
        """Image table under the bijection ``x -> perm[x]``."""
        n = self.order
        inv = [0] * n
        for x, px in enumerate(perm):
            inv[px] = x
        rows = [[perm[self.product[inv[a]][inv[b]]] for b in range(n)] for a in range(n)]
        labels = [self.labels[inv[a]] for a in range(n)]
        return CayleyTable.from_rows(rows, labels)

    def __eq__(self, other):
        if not isinstance(other, CayleyTable):
            return NotImplemented
        return self.product == other.product

    def __hash__(self):
        return hash(self.product)


@dataclass(frozen=True)
class GeneratorContext:
    """Designated e, f and the derived g = ef, h = fe."""

    e: int
    f: int
    g: int
    h: int

    @classmethod
    def from_table(cls, t: CayleyTable, e: int, f: int) -> "GeneratorContext":
        n = t.order
        if not (0 <= e < n and 0 <= f < n):
            raise TableError(f"generators ({e}, {f}) out of range for order {n}")
        if e == f:
            raise TableError("e and f must be distinct")
        return cls(e, f, t.mul(e, f), t.mul(f, e))

    def check(self, t: CayleyTable) -> None:
        if self.e == self.f:
            raise TableError("e and f must be distinct")
        if self.g != t.mul(self.e, self.f) or self.h != t.mul(self.f, self.e):
            raise TableError("g and h disagree with the table")


@dataclass
class IdentityReport:
    idempotent: bool
    right_modular: bool
    medial: bool
    left_distributive: bool
    right_distributive: bool
    elastic: bool
    latin_square: bool
    nowhere_commutative: bool
    counterexamples: dict = field(default_factory=dict)

    def verdicts(self) -> dict[str, bool]:
        return {name: getattr(self, name) for name in IDENTITY_NAMES}

    @property
    def all_pass(self) -> bool:
        return all(self.verdicts().values())

    def failures(self) -> list[str]:
        return [k for k, v in self.verdicts().items() if not v]


def _first(mask: np.ndarray) -> Optional[tuple[int, ...]]:
    hits = np.flatnonzero(mask)
    if hits.size == 0:
        return None
    return tuple(int(i) for i in np.unravel_index(hits[0], mask.shape))


def _identity_counterexamples(a: np.ndarray) -> dict[str, Optional[tuple]]:
    n = a.shape[0]
    r = np.arange(n)
    x = r[:, None, None]
    y = r[None, :, None]
    z = r[None, None, :]
    xy = a[x, y]
    out: dict[str, Optional[tuple]] = {}

    d = a[r, r]
    bad = np.flatnonzero(d != r)
    out["idempotent"] = (int(bad[0]),) if bad.size else None

    # xy.z = zy.x
    out["right_modular"] = _first(a[xy, z] != a[a[z, y], x])
    # x.yz = xy.xz
    out["left_distributive"] = _first(a[x, a[y, z]] != a[xy, a[x, z]])
    # xy.z = xz.yz
    out["right_distributive"] = _first(a[xy, z] != a[a[x, z], a[y, z]])
    # xy.x = x.yx
    xy2 = a[r[:, None], r[None, :]]
    out["elastic"] = _first(a[xy2, r[:, None]] != a[r[:, None], a[r[None, :], r[:, None]]])

    # xy.zw = xz.yw, one x-slice at a time to keep memory at n^3
    out["medial"] = None
    for xi in range(n):
        lhs = a[a[xi, r][:, None, None], a[r[:, None], r[None, :]][None, :, :]]
        rhs = a[a[xi, r][None, :, None], a[r[:, None], r[None, :]][:, None, :]]
        # lhs[y, z, w] = (x y)(z w); rhs[y, z, w] = (x z)(y w)
        hit = _first(lhs != rhs)
        if hit is not None:
            out["medial"] = (xi,) + hit
            break

    out["latin_square"] = _latin_counterexample(a)

    comm = (a == a.T) & (r[:, None] != r[None, :])
    out["nowhere_commutative"] = _first(comm)
    return out


def _latin_counterexample(a: np.ndarray) -> Optional[tuple]:
    n = a.shape[0]
    for x in range(n):
        seen: dict[int, int] = {}
        for y in range(n):
            v = int(a[x, y])
            if v in seen:
                return ("row", x, seen[v], y)
            seen[v] = y
    for y in range(n):
        seen = {}
        for x in range(n):
            v = int(a[x, y])
            if v in seen:
                return ("column", y, seen[v], x)
            seen[v] = x
    return None


def check_identities(t: CayleyTable) -> IdentityReport:
    """Exhaustive scan of the identity battery.

    Counterexamples are the first failing tuple in lexicographic order:
    ``(x,)`` for idempotency, ``(x, y, z)`` / ``(x, y, z, w)`` for the
    laws, ``(x, y)`` for a commuting pair, and ``("row"|"column", i, j, k)``
    for a repeated entry ``i`` at positions ``j < k``.
    """
    cx = _identity_counterexamples(t.array)
    verdicts = {k: cx[k] is None for k in IDENTITY_NAMES}
    return IdentityReport(
        **verdicts,
        counterexamples={k: v for k, v in cx.items() if v is not None},
    )


def is_latin(t: CayleyTable) -> bool:
    return _latin_counterexample(t.array) is None


def is_commutative(t: CayleyTable) -> bool:
    a = t.array
    return bool((a == a.T).all())


def generated_set(t: CayleyTable, seed: Iterable[int]) -> frozenset[int]:
    """Least subset containing ``seed`` and closed under the product."""
    a = t.array
    current = np.unique(np.fromiter(seed, dtype=np.int64))
    if current.size == 0:
        raise ValueError("seed must be nonempty")
    if current[0] < 0 or current[-1] >= t.order:
        raise IndexError("seed element out of range")
    while True:
        grown = np.union1d(current, a[np.ix_(current, current)].ravel())
        if grown.size == current.size:
            return frozenset(int(v) for v in current)
        current = grown


@dataclass(frozen=True)
class OneStepResult:
    verdict: bool
    # (x, y, generated subset) for a non-generating pair
    witness: Optional[tuple[int, int, frozenset]] = None
    commutative: bool = False

    def __bool__(self) -> bool:
        return self.verdict


def is_one_step(t: CayleyTable) -> OneStepResult:
    """Non-commutative, and every pair of distinct elements generates."""
    if is_commutative(t):
        return OneStepResult(False, commutative=True)
    n = t.order
    for x in range(n):
        for y in range(x + 1, n):
            s = generated_set(t, (x, y))
            if len(s) != n:
                return OneStepResult(False, witness=(x, y, s))
    return OneStepResult(True)


class DivisionError(ValueError):
    pass


def divide(t: CayleyTable, x: int, y: int) -> tuple[int, int]:
    """Return ``(r, s)`` with ``x*r = y`` and ``s*x = y``."""
    rows = t.product
    right = [c for c in range(t.order) if rows[x][c] == y]
    left = [c for c in range(t.order) if rows[c][x] == y]
    if len(right) != 1:
        raise DivisionError(f"x*r = y has {len(right)} solutions for x={x}, y={y}")
    if len(left) != 1:
        raise DivisionError(f"s*x = y has {len(left)} solutions for x={x}, y={y}")
    return right[0], left[0]


def count_rm_violations(t: CayleyTable) -> int:
    a = t.array
    r = np.arange(t.order)
    x = r[:, None, None]
    y = r[None, :, None]
    z = r[None, None, :]
    return int(np.count_nonzero(a[a[x, y], z] != a[a[z, y], x]))


def direct_product(a: CayleyTable, b: CayleyTable) -> CayleyTable:
    """Componentwise product; element (i, j) has index i * |b| + j."""
    m = b.order
    n = a.order * m
    rows = [
        [a.mul(p // m, q // m) * m + b.mul(p % m, q % m) for q in range(n)]
        for p in range(n)
    ]
    labels = [f"({la},{lb})" for la in a.labels for lb in b.labels]
    return CayleyTable.from_rows(rows, labels)


def left_projection(n: int) -> CayleyTable:
    return CayleyTable.from_rows([[x] * n for x in range(n)])


def trivial_table() -> CayleyTable:
    return CayleyTable.from_rows([[0]])
