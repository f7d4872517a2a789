"""Classify every length-n relation word and compute M(n)."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from .closure import DEFAULT_BUDGET, DEFAULT_MAX_ROUNDS, BudgetExceeded, Degenerate, Success, construct
from .dimension import dimension
from .groupoid import CayleyTable, GeneratorContext
from .iso import extend_pair, find_isomorphism
from .word import Word, catalan, enumerate_words, parse

GENUINE = "genuine"
REDUCIBLE = "reducible"
DEGENERATE = "degenerate"
BUDGET = "budget-exceeded"


@dataclass(frozen=True)
class WordVerdict:
    word: Word
    kind: str
    order: Optional[int] = None
    dimension: Optional[int] = None
    witness: Optional[Word] = None  # shorter word for e, when reducible
    reason: str = ""
    table: Optional[CayleyTable] = field(default=None, repr=False)


@dataclass(frozen=True)
class GenuineClass:
    words: tuple[Word, ...]
    table: CayleyTable = field(repr=False)
    ctx: GeneratorContext = field(repr=False)

    @property
    def order(self) -> int:
        return self.table.order

    @property
    def representative(self) -> Word:
        return self.words[0]


@dataclass(frozen=True)
class CensusReport:
    n: int
    total_words: int
    verdicts: tuple[WordVerdict, ...]
    classes: tuple[GenuineClass, ...]
    plain_classes: tuple[tuple[int, ...], ...]  # indices into classes
    budget: int

    @property
    def orders(self) -> list[int]:
        return sorted(c.order for c in self.classes)

    @property
    def M(self) -> Optional[int]:
        return max(self.orders) if self.classes else None

    @property
    def budget_hits(self) -> list[Word]:
        return [v.word for v in self.verdicts if v.kind == BUDGET]

    @property
    def M_is_lower_bound(self) -> bool:
        return bool(self.budget_hits)

    def counts(self) -> dict[str, int]:
        out = {GENUINE: 0, REDUCIBLE: 0, DEGENERATE: 0, BUDGET: 0}
        for v in self.verdicts:
            out[v.kind] += 1
        return out


def classify_word(w: Word, budget: int = DEFAULT_BUDGET, max_rounds: int = DEFAULT_MAX_ROUNDS) -> WordVerdict:
    out = construct(w, budget=budget, max_rounds=max_rounds)
    if isinstance(out, BudgetExceeded):
        return WordVerdict(w, BUDGET, reason=f"{out.elements_reached} classes > budget {out.budget}")
    if isinstance(out, Degenerate):
        order = out.table.order if out.table is not None else None
        return WordVerdict(w, DEGENERATE, order=order, reason=f"{out.reason}: {out.detail}")
    assert isinstance(out, Success)
    if out.dimension < w.length:
        wit = dimension(out.table, out.ctx).witness
        return WordVerdict(w, REDUCIBLE, out.order, out.dimension, witness=wit, table=out.table)
    return WordVerdict(w, GENUINE, out.order, out.dimension, table=out.table)


def _classify_text(args):
    text, budget, max_rounds = args
    return classify_word(parse(text), budget, max_rounds)


def run_census(n: int, budget: int = DEFAULT_BUDGET, jobs: int = 1, max_rounds: int = DEFAULT_MAX_ROUNDS) -> CensusReport:
    if n < 2:
        raise ValueError("census needs n >= 2")
    words = enumerate_words(n)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            verdicts = list(pool.map(_classify_text, [(w.render(), budget, max_rounds) for w in words], chunksize=4))
    else:
        verdicts = [classify_word(w, budget, max_rounds) for w in words]

    # pointed classes, first-seen order
    reps: list[list] = []  # [table, ctx, words]
    for v in verdicts:
        if v.kind != GENUINE:
            continue
        ctx = GeneratorContext.from_table(v.table, 0, 1)
        for rep in reps:
            if rep[0].order == v.table.order and extend_pair(v.table, rep[0], (0, 1), (rep[1].e, rep[1].f)):
                rep[2].append(v.word)
                break
        else:
            reps.append([v.table, ctx, [v.word]])
    classes = tuple(GenuineClass(tuple(ws), t, c) for t, c, ws in reps)

    plain: list[list[int]] = []
    for i, c in enumerate(classes):
        for group in plain:
            if find_isomorphism(c.table, classes[group[0]].table):
                group.append(i)
                break
        else:
            plain.append([i])
    return CensusReport(n, len(words), tuple(verdicts), classes, tuple(tuple(g) for g in plain), budget)


# Two-variable identities, as (name, lhs, rhs) over x, y; a pair is a product.
IDENTITY_TAGS = {
    2: [("xy.x = y", (("x", "y"), "x"), "y")],
    4: [
        ("x = y[y(yxy)]", "x", ("y", ("y", (("y", "x"), "y")))),
        ("x = y[y(xy.y)]", "x", ("y", ("y", (("x", "y"), "y")))),
        ("x = (yxy)(yx)", "x", ((("y", "x"), "y"), ("y", "x"))),
        ("x = (yx)(yxy)", "x", (("y", "x"), (("y", "x"), "y"))),
        ("x = y(yx.xy)", "x", ("y", (("y", "x"), ("x", "y")))),
        ("x = y(xy.yx)", "x", ("y", (("x", "y"), ("y", "x")))),
    ],
}


def _value(term, env, t: CayleyTable) -> int:
    if isinstance(term, str):
        return env[term]
    return t.mul(_value(term[0], env, t), _value(term[1], env, t))


def holds_everywhere(t: CayleyTable, lhs, rhs) -> bool:
    return all(
        _value(lhs, {"x": x, "y": y}, t) == _value(rhs, {"x": x, "y": y}, t)
        for x in range(t.order)
        for y in range(t.order)
    )


def identity_tags(report: CensusReport) -> dict[int, list[str]]:
    """For each genuine class (by index), the listed two-variable identities it satisfies."""
    candidates = IDENTITY_TAGS.get(report.n, [])
    return {
        i: [name for name, lhs, rhs in candidates if holds_everywhere(c.table, lhs, rhs)]
        for i, c in enumerate(report.classes)
    }


def expected_total(n: int) -> int:
    return 2**n * catalan(n - 1)
