"""Ground truth that does not go through the closure engine.

``brute_force_models`` is a backtracking search over whole tables of a
fixed small order.  ``affine_model`` builds x*y = phi(x) + (1 - phi)(y)
over Z_m or Z_m^k, which is idempotent and medial by construction and
right modular exactly when phi^2 + phi = 1.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Optional, Sequence, Union

from .groupoid import CayleyTable, GeneratorContext, IDENTITY_NAMES, is_one_step
from .iso import canonical_form
from .word import Word, evaluate

MAX_SEARCH_ORDER = 6

SEARCHABLE = IDENTITY_NAMES + ("one_step",)

_LAWS = {
    "right_modular": ((("x", "y"), "z"), (("z", "y"), "x")),
    "medial": ((("x", "y"), ("z", "w")), (("x", "z"), ("y", "w"))),
    "left_distributive": (("x", ("y", "z")), (("x", "y"), ("x", "z"))),
    "right_distributive": ((("x", "y"), "z"), (("x", "z"), ("y", "z"))),
    "elastic": ((("x", "y"), "x"), ("x", ("y", "x"))),
}


class SearchCapError(ValueError):
    pass


class NoSuchAutomorphism(ValueError):
    pass


@dataclass(frozen=True)
class SearchSpec:
    order: int
    identities: frozenset = field(default_factory=frozenset)
    relation: Optional[Word] = None

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be at least 1")
        ids = frozenset(self.identities)
        unknown = ids - set(SEARCHABLE)
        if unknown:
            raise ValueError(f"unknown identities: {', '.join(sorted(unknown))}")
        object.__setattr__(self, "identities", ids)


def _law_vars(term, acc):
    if isinstance(term, str):
        if term not in acc:
            acc.append(term)
    else:
        _law_vars(term[0], acc)
        _law_vars(term[1], acc)
    return acc


def _eval(term, env, T):
    """Value of ``term`` or -1 if some product is still open."""
    if isinstance(term, str):
        return env[term]
    a = _eval(term[0], env, T)
    if a < 0:
        return -1
    b = _eval(term[1], env, T)
    if b < 0:
        return -1
    return T[a][b]


class _Search:
    def __init__(self, spec: SearchSpec):
        self.n = spec.order
        self.spec = spec
        ids = spec.identities
        self.idempotent = "idempotent" in ids
        self.latin = "latin_square" in ids
        self.nowhere = "nowhere_commutative" in ids
        self.laws = [
            (law, _law_vars(law[0], _law_vars(law[1], [])))
            for name, law in _LAWS.items()
            if name in ids
        ]
        n = self.n
        self.T = [[-1] * n for _ in range(n)]
        if self.idempotent:
            for x in range(n):
                self.T[x][x] = x
        self.cells = [(a, b) for a in range(n) for b in range(n) if not (self.idempotent and a == b)]
        self.row_used = [set() for _ in range(n)]
        self.col_used = [set() for _ in range(n)]
        if self.idempotent:
            for x in range(n):
                self.row_used[x].add(x)
                self.col_used[x].add(x)
        self.found: list[CayleyTable] = []

    def _laws_ok(self) -> bool:
        # every fully defined instance must hold; cheap at the capped orders
        n, T = self.n, self.T
        for (lhs, rhs), names in self.laws:
            for vals in product(range(n), repeat=len(names)):
                env = dict(zip(names, vals))
                lv = _eval(lhs, env, T)
                if lv < 0:
                    continue
                rv = _eval(rhs, env, T)
                if rv >= 0 and lv != rv:
                    return False
        return True

    def _ok_after(self, a: int, b: int) -> bool:
        T = self.T
        if self.nowhere and a != b and T[b][a] == T[a][b]:
            return False
        return self._laws_ok()

    def run(self, start: int = 0) -> list[CayleyTable]:
        self._dfs(start)
        return self.found

    def _dfs(self, k: int) -> None:
        if k == len(self.cells):
            self._leaf()
            return
        a, b = self.cells[k]
        for v in range(self.n):
            if self.latin and (v in self.row_used[a] or v in self.col_used[b]):
                continue
            self.T[a][b] = v
            self.row_used[a].add(v)
            self.col_used[b].add(v)
            if self._ok_after(a, b):
                self._dfs(k + 1)
            self.row_used[a].discard(v)
            self.col_used[b].discard(v)
            self.T[a][b] = -1

    def _leaf(self) -> None:
        t = CayleyTable.from_rows(self.T)
        if "one_step" in self.spec.identities and not is_one_step(t):
            return
        if self.spec.relation is not None and not satisfies_relation(t, self.spec.relation):
            return
        self.found.append(t)


def satisfies_relation(t: CayleyTable, w: Word) -> bool:
    """Some pair e != f with ef != fe has ``w`` evaluating to e."""
    for e in range(t.order):
        for f in range(t.order):
            if e == f or t.mul(e, f) == t.mul(f, e):
                continue
            ctx = GeneratorContext.from_table(t, e, f)
            if evaluate(w, t, ctx) == e:
                return True
    return False


def _search_branch(args):
    spec, first_value = args
    s = _Search(spec)
    if not s.cells:
        return s.run()
    a, b = s.cells[0]
    if s.latin and (first_value in s.row_used[a] or first_value in s.col_used[b]):
        return []
    s.T[a][b] = first_value
    s.row_used[a].add(first_value)
    s.col_used[b].add(first_value)
    if not s._ok_after(a, b):
        return []
    return s.run(1)


def brute_force_models(spec: SearchSpec, jobs: int = 1) -> list[CayleyTable]:
    """All models of ``spec`` at exactly ``spec.order``, one per isomorphism class."""
    if spec.order > MAX_SEARCH_ORDER:
        raise SearchCapError(f"brute-force search is capped at order {MAX_SEARCH_ORDER}")
    probe = _Search(spec)
    if not probe.cells:
        raw = probe.run()
    else:
        branches = [(spec, v) for v in range(spec.order)]
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                parts = list(pool.map(_search_branch, branches))
        else:
            parts = [_search_branch(b) for b in branches]
        raw = [t for part in parts for t in part]
    seen: dict = {}
    for t in raw:
        seen.setdefault(canonical_form(t), t)
    return [CayleyTable.from_rows(key) for key in sorted(seen)]


# -- affine construction -------------------------------------------------

Phi = Union[int, Sequence[Sequence[int]]]


def _matmul(p, q, m):
    k = len(p)
    return [[sum(p[i][l] * q[l][j] for l in range(k)) % m for j in range(k)] for i in range(k)]


def _det(mat, m):
    # integer Bareiss-free cofactor expansion; k is tiny
    k = len(mat)
    if k == 1:
        return mat[0][0] % m
    total = 0
    for j in range(k):
        minor = [row[:j] + row[j + 1:] for row in mat[1:]]
        total += (-1) ** j * mat[0][j] * _det(minor, m)
    return total % m


def phi_roots(m: int) -> list[int]:
    """Residues t mod m with t^2 + t - 1 = 0 (scalar choices of phi)."""
    return [t for t in range(m) if (t * t + t - 1) % m == 0]


def affine_model(modulus: int, phi: Phi) -> CayleyTable:
    """x*y = phi(x) + (1 - phi)(y) on Z_m (scalar phi) or Z_m^k (k x k matrix phi).

    Vectors are indexed in base m with the first coordinate most significant.
    """
    from math import gcd

    m = int(modulus)
    if m < 1:
        raise ValueError("modulus must be positive")
    if isinstance(phi, int):
        mat = [[phi % m]]
    else:
        mat = [[int(v) % m for v in row] for row in phi]
        if any(len(row) != len(mat) for row in mat):
            raise ValueError("phi must be a square matrix")
    k = len(mat)
    ident = [[int(i == j) % m for j in range(k)] for i in range(k)]
    sq = _matmul(mat, mat, m)
    if any((sq[i][j] + mat[i][j] - ident[i][j]) % m for i in range(k) for j in range(k)):
        raise NoSuchAutomorphism(f"phi^2 + phi != 1 modulo {m}")
    if gcd(_det(mat, m), m) != 1:
        raise NoSuchAutomorphism(f"phi is not invertible modulo {m}")
    psi = [[(ident[i][j] - mat[i][j]) % m for j in range(k)] for i in range(k)]

    size = m**k
    vecs = [[(idx // m ** (k - 1 - i)) % m for i in range(k)] for idx in range(size)]

    def apply(a, v):
        return [sum(a[i][j] * v[j] for j in range(k)) % m for i in range(k)]

    def index(v):
        out = 0
        for c in v:
            out = out * m + c
        return out

    phis = [apply(mat, v) for v in vecs]
    psis = [apply(psi, v) for v in vecs]
    rows = [
        [index([(phis[x][i] + psis[y][i]) % m for i in range(k)]) for y in range(size)]
        for x in range(size)
    ]
    labels = [str(v[0]) if k == 1 else ",".join(map(str, v)) for v in vecs]
    return CayleyTable.from_rows(rows, labels)


# -- the relation as an element of Z[phi] ---------------------------------
#
# A finite quasigroup in the variety generated by e, f is affine over a
# cyclic module Z[phi]/I with phi^2 + phi = 1; with e = 0, f = 1 the word w
# evaluates to an element r_w and the model forced by e = w is Z[phi]/(r_w),
# whose order is |N(r_w)|.  Elements are pairs (a, b) meaning a + b*phi.

def _times_phi(v):
    a, b = v
    return (b, a - b)


def _times_phi2(v):
    a, b = v
    return (a - b, 2 * b - a)


def relation_element(w: Word) -> tuple[int, int]:
    """r_w = w(1, 1 - phi) under x*y = phi*x + phi^2*y."""
    def go(node):
        if node.letter == "f":
            return (1, 0)
        if node.letter == "g":
            return (1, -1)
        p = _times_phi(go(node.left))
        q = _times_phi2(go(node.right))
        return (p[0] + q[0], p[1] + q[1])

    return go(w)


def norm(v: tuple[int, int]) -> int:
    a, b = v
    return a * a - a * b - b * b


def predicted_order(w: Word) -> int:
    """Order of the model forced by e = w; 0 means no finite bound."""
    return abs(norm(relation_element(w)))
