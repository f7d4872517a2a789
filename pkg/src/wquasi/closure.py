"""Build the model forced by a defining relation ``e = w(f, ef)``.

The engine is a Felsch-style enumeration for quasigroups in the variety:

* classes are union-find nodes, each born as a hash-consed term over e, f;
* the partial product is a map on class representatives;
* every new or moved table entry is matched against each position of each
  identity (right modularity, the distributive laws, elasticity and,
  optionally, mediality); a fully evaluated instance with unequal sides
  merges them, and an instance missing only its outermost product defines
  that product;
* rows and columns are kept injective, so two equal entries in a row or a
  column merge their columns or rows (left and right cancellation);
* when no deduction is pending, the first undefined product in
  creation order becomes a fresh class.

Cancellation only holds in one-step models, so the table is re-checked
from scratch before a result is reported.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Union

from .groupoid import CayleyTable, GeneratorContext, check_identities, is_one_step
from .word import Word, evaluate

# Laws as (lhs, rhs) over variables; a pair is a product.
LAWS = {
    "right_modular": ((("x", "y"), "z"), (("z", "y"), "x")),
    "left_distributive": (("x", ("y", "z")), (("x", "y"), ("x", "z"))),
    "right_distributive": ((("x", "y"), "z"), (("x", "z"), ("y", "z"))),
    "elastic": ((("x", "y"), "x"), ("x", ("y", "x"))),
    "medial": ((("x", "y"), ("z", "w")), (("x", "z"), ("y", "w"))),
}
DEFAULT_LAWS = ("right_modular", "left_distributive", "right_distributive", "elastic")

DEFAULT_BUDGET = 64
DEFAULT_MAX_ROUNDS = 10**6

COLLAPSED = "collapsed-e-equals-f"
NOT_ONE_STEP = "not-one-step"
INCONSISTENT = "inconsistent"


@dataclass(frozen=True)
class TraceEvent:
    rule: str
    instance: tuple
    merged: tuple[int, int]


@dataclass(frozen=True)
class Success:
    table: CayleyTable
    ctx: GeneratorContext
    term_names: dict[int, str]
    dimension: int
    trace: tuple[TraceEvent, ...] = field(default=(), repr=False)

    @property
    def order(self) -> int:
        return self.table.order


@dataclass(frozen=True)
class Degenerate:
    reason: str
    detail: str
    trace: tuple[TraceEvent, ...] = field(default=(), repr=False)
    table: Optional[CayleyTable] = field(default=None, repr=False)


@dataclass(frozen=True)
class BudgetExceeded:
    elements_reached: int
    budget: int
    rounds: int


ClosureOutcome = Union[Success, Degenerate, BudgetExceeded]


class _Collapse(Exception):
    pass


class _OverBudget(Exception):
    pass


def _flatten(law):
    """Turn a law into atoms ``(left, right, out)`` plus the two side variables."""
    atoms: list[tuple[str, str, str]] = []
    counter = [0]

    def go(term) -> str:
        if isinstance(term, str):
            return term
        a = go(term[0])
        b = go(term[1])
        counter[0] += 1
        out = f"_{counter[0]}"
        atoms.append((a, b, out))
        return out

    lhs, rhs = law
    left, right = go(lhs), go(rhs)
    return tuple(atoms), left, right


def _compile_rule(atoms, lhs, rhs, role: int, law_index: int) -> str:
    """Source of the join fired when a table entry plays atom ``role``.

    The plan is static: evaluate each atom whose factors are known, else
    walk the entries holding a known value, else loop a variable over the
    live classes.  Unknown products stay ``None`` and are left to
    ``_Engine.conclude``.
    """
    names: dict[str, str] = {}

    def nm(v: str) -> str:
        return names.setdefault(v, "v" + v.replace("_", "t"))

    u, v, w = atoms[role]
    code = ["def rule(eng, a, b, c):", "    get = eng.table.get", "    inv = eng.inv", "    live = tuple(eng.row)"]
    if u == v:
        code.append("    if a != b: return")
    code += [f"    {nm(u)} = a", f"    {nm(v)} = b", f"    {nm(w)} = c"]
    bound = {u, v, w}
    nullable: set[str] = set()
    done = {role}
    pad = "    "

    while len(done) < len(atoms):
        ready = [i for i, (p, q, _) in enumerate(atoms) if i not in done and p in bound and q in bound]
        if ready:
            for i in ready:
                p, q, r = atoms[i]
                expr = f"get(({nm(p)}, {nm(q)}))"
                guards = [f"{nm(s)} is not None" for s in (p, q) if s in nullable]
                if guards:
                    expr += f" if {' and '.join(guards)} else None"
                code.append(f"{pad}{nm(r)} = {expr}")
                bound.add(r)
                nullable.add(r)
                done.add(i)
            continue
        via = next(
            (i for i, (p, q, r) in enumerate(atoms) if i not in done and r in bound),
            None,
        )
        if via is not None:
            p, q, r = atoms[via]
            if r in nullable:
                code.append(f"{pad}if {nm(r)} is None: continue" if pad != "    " else f"{pad}if {nm(r)} is None: return")
            if (p in bound) != (q in bound):
                # one factor known: divide through the row or column index
                known, other, index = (p, q, "rowval") if p in bound else (q, p, "colval")
                code.append(f"{pad}{nm(other)} = eng.{index}[{nm(known)}].get({nm(r)})")
                code.append(f"{pad}if {nm(other)} is not None:")
                pad += "    "
                bound.add(other)
                done.add(via)
                continue
            code.append(f"{pad}for _p, _q in tuple(inv[{nm(r)}]):")
            pad += "    "
            for s, tmp in ((p, "_p"), (q, "_q")):
                if s in bound:
                    code.append(f"{pad}if {tmp} != {nm(s)}: continue")
            if p == q and p not in bound:
                code.append(f"{pad}if _p != _q: continue")
            if p not in bound:
                code.append(f"{pad}{nm(p)} = _p")
            if q not in bound:
                code.append(f"{pad}{nm(q)} = _q")
            bound.update((p, q))
            done.add(via)
            continue
        free = next(s for i, atom in enumerate(atoms) if i not in done for s in atom[:2] if s not in bound)
        code.append(f"{pad}for {nm(free)} in live:")
        pad += "    "
        bound.add(free)
    values = ", ".join(f"{s!r}: {nm(s)}" for s in sorted(bound))
    code.append(f"{pad}if {nm(lhs)} != {nm(rhs)}:")
    code.append(f"{pad}    eng.conclude({law_index}, {{{values}}})")
    return "\n".join(code) + "\n"


def _compile_law(atoms, lhs, rhs, law_index: int) -> list:
    rules = []
    for role in range(len(atoms)):
        scope: dict = {}
        exec(compile(_compile_rule(atoms, lhs, rhs, role, law_index), f"<law {law_index}.{role}>", "exec"), scope)
        rules.append(scope["rule"])
    return rules


class _Engine:
    def __init__(self, laws, budget: int, max_rounds: int, trace: bool):
        self.parent: list[int] = []
        self.term: list[str] = []
        self.alive: list[int] = []  # creation order; dead ids pruned lazily
        self.table: dict[tuple[int, int], int] = {}
        self.row: dict[int, dict[int, int]] = {}
        self.col: dict[int, dict[int, int]] = {}
        self.rowval: dict[int, dict[int, int]] = {}
        self.colval: dict[int, dict[int, int]] = {}
        self.inv: dict[int, set[tuple[int, int]]] = {}
        self.occurs: dict[int, set[tuple[int, int]]] = {}
        self.hashcons: dict[str, int] = {}
        self.pending: deque[tuple[int, int]] = deque()
        self.merges: deque[tuple[int, int, str, tuple]] = deque()
        self.live_count = 0
        self.budget = budget
        self.max_rounds = max_rounds
        self.rounds = 0
        self.keep_trace = trace
        self.trace: list[TraceEvent] = []
        self.laws = [(name, *_flatten(LAWS[name])) for name in laws]
        self.rules = [r for i, (_, atoms, lhs, rhs) in enumerate(self.laws) for r in _compile_law(atoms, lhs, rhs, i)]

    # -- classes -------------------------------------------------------
    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def new_class(self, term: str) -> int:
        c = len(self.parent)
        self.parent.append(c)
        self.term.append(term)
        self.alive.append(c)
        self.row[c] = {}
        self.col[c] = {}
        self.rowval[c] = {}
        self.colval[c] = {}
        self.inv[c] = set()
        self.occurs[c] = set()
        self.live_count += 1
        if self.live_count > self.budget:
            raise _OverBudget
        self.set_entry(c, c, c)
        return c

    def define(self, a: int, b: int) -> int:
        term = f"({self.term[a]} {self.term[b]})"
        c = self.new_class(term)
        self.hashcons[term] = c
        self.set_entry(a, b, c)
        return c

    # -- table ---------------------------------------------------------
    def set_entry(self, a: int, b: int, c: int, why: str = "define", inst: tuple = ()) -> None:
        old = self.table.get((a, b))
        if old is not None:
            if old != c:
                self.merges.append((old, c, why, inst))
            return
        other_col = self.rowval[a].get(c)
        if other_col is not None and other_col != b:
            self.merges.append((other_col, b, "left-cancel", (a, other_col, b)))
            return
        other_row = self.colval[b].get(c)
        if other_row is not None and other_row != a:
            self.merges.append((other_row, a, "right-cancel", (other_row, a, b)))
            return
        self.table[(a, b)] = c
        self.row[a][b] = c
        self.col[b][a] = c
        self.rowval[a][c] = b
        self.colval[b][c] = a
        self.inv[c].add((a, b))
        self.occurs[a].add((a, b))
        self.occurs[b].add((a, b))
        self.occurs[c].add((a, b))
        self.pending.append((a, b))

    def remove_entry(self, a: int, b: int) -> int:
        c = self.table.pop((a, b))
        del self.row[a][b]
        del self.col[b][a]
        del self.rowval[a][c]
        del self.colval[b][c]
        self.inv[c].discard((a, b))
        for x in (a, b, c):
            self.occurs[x].discard((a, b))
        return c

    def union(self, x: int, y: int, why: str, inst: tuple) -> None:
        x, y = self.find(x), self.find(y)
        if x == y:
            return
        keep, dead = min(x, y), max(x, y)
        if self.keep_trace:
            self.trace.append(TraceEvent(why, inst, (keep, dead)))
        if {keep, dead} == {0, 1}:
            raise _Collapse
        moved = [(a, b, self.remove_entry(a, b)) for (a, b) in list(self.occurs[dead])]
        self.parent[dead] = keep
        for d in (self.row, self.col, self.rowval, self.colval, self.inv, self.occurs):
            del d[dead]
        self.live_count -= 1
        for a, b, c in moved:
            self.set_entry(self.find(a), self.find(b), self.find(c), why, inst)

    def settle(self) -> None:
        table, rules = self.table, self.rules
        while self.merges or self.pending:
            while self.merges:
                x, y, why, inst = self.merges.popleft()
                self.union(x, y, why, inst)
            if self.pending:
                a, b = self.pending.popleft()
                c = table.get((a, b))
                if c is None:
                    continue
                self.rounds += 1
                if self.rounds > self.max_rounds:
                    raise _OverBudget
                for rule in rules:
                    rule(self, a, b, c)

    # -- deduction -----------------------------------------------------
    def conclude(self, law_index: int, values: dict) -> None:
        """Act on an instance whose sides are unequal or not both known."""
        name, atoms, lhs, rhs = self.laws[law_index]
        lv, rv = values[lhs], values[rhs]
        if lv is not None and rv is not None:
            inst = tuple((k, x) for k, x in sorted(values.items()) if k[0] != "_")
            self.merges.append((lv, rv, name, inst))
            return
        if lv is None and rv is None:
            return
        side, known = (lhs, rv) if lv is None else (rhs, lv)
        missing = [m for m in atoms if values[m[2]] is None]
        top = next(m for m in missing if m[2] == side)
        u, v, _ = top
        if len(missing) == 1:
            self.set_entry(values[u], values[v], known)
            return
        if len(missing) != 2:
            return
        inner = next(m for m in missing if m is not top)
        iu, iv, iw = inner
        if values[iu] is None or values[iv] is None:
            return
        # one factor of the top product is unknown: divide
        if u == iw and values[v] is not None:
            sol = self.colval[values[v]].get(known)
        elif v == iw and values[u] is not None:
            sol = self.rowval[values[u]].get(known)
        else:
            return
        if sol is not None:
            self.set_entry(values[iu], values[iv], sol)

    # -- driver --------------------------------------------------------
    def next_undefined(self) -> Optional[tuple[int, int]]:
        live = [c for c in self.alive if self.parent[c] == c]
        self.alive = live
        for j, y in enumerate(live):
            ry = self.row[y]
            cy = self.col[y]
            for x in live[: j + 1]:
                if x not in ry:
                    return (y, x)
                if x not in cy:
                    return (x, y)
        return None


def construct(
    w: Word,
    budget: int = DEFAULT_BUDGET,
    max_rounds: int = DEFAULT_MAX_ROUNDS,
    laws=DEFAULT_LAWS,
    trace: bool = False,
) -> ClosureOutcome:
    if w.length < 2:
        raise ValueError("the relation word must have length at least 2")
    if budget < 4:
        raise ValueError("budget must be at least 4")
    unknown = sorted(set(laws) - set(LAWS))
    if unknown:
        raise ValueError(f"unknown laws: {', '.join(unknown)}")
    eng = _Engine(laws, budget, max_rounds, trace)
    try:
        e = eng.new_class("e")
        f = eng.new_class("f")
        g = eng.define(e, f)
        eng.settle()
        memo: dict[Word, int] = {}
        for node in w.subwords():
            if node.letter == "f":
                memo[node] = f
            elif node.letter == "g":
                memo[node] = g
            else:
                a, b = eng.find(memo[node.left]), eng.find(memo[node.right])
                val = eng.table.get((a, b))
                memo[node] = val if val is not None else eng.define(a, b)
            eng.settle()
        eng.merges.append((eng.find(memo[w]), e, "relation", (w.render(),)))
        eng.settle()
        while True:
            gap = eng.next_undefined()
            if gap is None:
                break
            eng.define(*gap)
            eng.settle()
    except _Collapse:
        return Degenerate(COLLAPSED, "e and f were identified", tuple(eng.trace))
    except _OverBudget:
        return BudgetExceeded(eng.live_count, budget, eng.rounds)
    return _finish(eng, w)


def _finish(eng: _Engine, w: Word) -> ClosureOutcome:
    from .dimension import DimensionError, dimension

    live = [c for c in eng.alive if eng.parent[c] == c]
    index = {c: i for i, c in enumerate(live)}
    rows = [[index[eng.table[(a, b)]] for b in live] for a in live]
    names = {index[c]: eng.term[c] for c in live}
    table = CayleyTable.from_rows(rows, [_compact(eng.term[c]) for c in live])
    trace = tuple(eng.trace)
    ctx = GeneratorContext.from_table(table, 0, 1)
    if evaluate(w, table, ctx) != ctx.e:
        return Degenerate(INCONSISTENT, "the relation fails on the completed table", trace, table)
    report = check_identities(table)
    if not report.all_pass:
        return Degenerate(INCONSISTENT, f"identity failures: {', '.join(report.failures())}", trace, table)
    one = is_one_step(table)
    if not one:
        x, y, s = one.witness
        return Degenerate(NOT_ONE_STEP, f"elements {x}, {y} generate only {len(s)} of {table.order}", trace, table)
    try:
        dim = dimension(table, ctx).value
    except DimensionError as exc:
        return Degenerate(INCONSISTENT, str(exc), trace, table)
    return Success(table, ctx, names, dim, trace)


def _compact(term: str) -> str:
    return term.replace(" ", ".")
