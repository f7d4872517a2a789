from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wquasi.groupoid import (
    IDENTITY_NAMES,
    CayleyTable,
    DivisionError,
    GeneratorContext,
    TableError,
    check_identities,
    count_rm_violations,
    direct_product,
    divide,
    generated_set,
    is_commutative,
    is_latin,
    is_one_step,
    left_projection,
    trivial_table,
)
from wquasi.rmtester import swap_entries

# Naive first counterexamples, straight from the definitions.
NAIVE = {
    "right_modular": (3, lambda m, x, y, z: m(m(x, y), z) == m(m(z, y), x)),
    "left_distributive": (3, lambda m, x, y, z: m(x, m(y, z)) == m(m(x, y), m(x, z))),
    "right_distributive": (3, lambda m, x, y, z: m(m(x, y), z) == m(m(x, z), m(y, z))),
    "elastic": (2, lambda m, x, y: m(m(x, y), x) == m(x, m(y, x))),
    "medial": (4, lambda m, x, y, z, w: m(m(x, y), m(z, w)) == m(m(x, z), m(y, w))),
    "idempotent": (1, lambda m, x: m(x, x) == x),
}


def naive_counterexample(t, name):
    arity, law = NAIVE[name]
    for tup in product(range(t.order), repeat=arity):
        if not law(t.mul, *tup):
            return tup
    return None


tables = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(0, n - 1), min_size=n, max_size=n), min_size=n, max_size=n)
).map(CayleyTable.from_rows)


def test_table_validation():
    with pytest.raises(TableError):
        CayleyTable.from_rows([[0, 2], [1, 0]])
    with pytest.raises(TableError):
        CayleyTable.from_rows([[0, 1]])
    with pytest.raises(TableError):
        CayleyTable.from_rows([[0, 1], [1, 0]], ["a", "a"])
    with pytest.raises(TableError):
        CayleyTable.from_rows([])


def test_context_validation(t4):
    with pytest.raises(TableError):
        GeneratorContext.from_table(t4.table, 1, 1)
    bad = GeneratorContext(0, 1, 3, 3)
    with pytest.raises(TableError):
        bad.check(t4.table)


def test_t4_battery(t4):
    rep = check_identities(t4.table)
    assert rep.all_pass and rep.counterexamples == {}
    assert set(rep.verdicts()) == set(IDENTITY_NAMES)


def test_trivial_battery():
    assert check_identities(trivial_table()).all_pass


def test_left_projection_battery():
    rep = check_identities(left_projection(2))
    assert rep.idempotent
    assert not rep.right_modular
    x, y, z = rep.counterexamples["right_modular"]
    assert x != z
    assert not rep.latin_square


def test_verdict_false_iff_counterexample(fixtures):
    for t in [left_projection(3), trivial_table(), fixtures["t4"].table, swap_entries(fixtures["t4"].table, 0, 1, 2)]:
        rep = check_identities(t)
        for name, ok in rep.verdicts().items():
            assert ok == (name not in rep.counterexamples)


@given(tables)
def test_battery_matches_naive(t):
    rep = check_identities(t)
    for name in NAIVE:
        assert rep.counterexamples.get(name) == naive_counterexample(t, name), name
    rows_ok = all(len(set(r)) == t.order for r in t.product)
    cols_ok = all(len({t.product[x][y] for x in range(t.order)}) == t.order for y in range(t.order))
    assert rep.latin_square == (rows_ok and cols_ok) == is_latin(t)
    nowhere = all(t.mul(x, y) != t.mul(y, x) for x in range(t.order) for y in range(t.order) if x != y)
    assert rep.nowhere_commutative == nowhere


@given(tables)
def test_rm_count_matches_naive(t):
    n = t.order
    m = t.mul
    naive = sum(m(m(x, y), z) != m(m(z, y), x) for x in range(n) for y in range(n) for z in range(n))
    assert count_rm_violations(t) == naive


def test_latin_counterexample_shape():
    t = CayleyTable.from_rows([[0, 1, 1], [2, 1, 0], [1, 0, 2]])
    assert check_identities(t).counterexamples["latin_square"] == ("row", 0, 1, 2)


def test_generated_set(t4, fixtures):
    t = t4.table
    assert generated_set(t, {t4.ctx.e}) == {t4.ctx.e}
    assert generated_set(t, {t4.ctx.e, t4.ctx.f}) == set(range(4))
    assert generated_set(fixtures["table3_5"].table, {3, 17}) == set(range(29))
    with pytest.raises(ValueError):
        generated_set(t, [])


@given(tables, st.data())
def test_generated_set_is_closed_and_least(t, data):
    seed = data.draw(st.sets(st.integers(0, t.order - 1), min_size=1))
    s = generated_set(t, seed)
    assert seed <= s
    assert all(t.mul(a, b) in s for a in s for b in s)
    # least: every element is reachable by a derivation from the seed
    reach = set(seed)
    while True:
        new = {t.mul(a, b) for a in reach for b in reach} | reach
        if new == reach:
            break
        reach = new
    assert s == reach


def test_one_step(t4):
    assert is_one_step(t4.table)
    res = is_one_step(trivial_table())
    assert not res and res.commutative


def test_direct_product_not_one_step(t4):
    p = direct_product(t4.table, t4.table)
    assert p.order == 16 and check_identities(p).all_pass
    res = is_one_step(p)
    assert not res
    x, y, s = res.witness
    # the witness closes inside one layer, {c} x T4 or T4 x {c}
    assert len(s) == 4
    assert len({v // 4 for v in s}) == 1 or len({v % 4 for v in s}) == 1


def test_divide(t4, fixtures):
    t, c = t4.table, t4.ctx
    assert divide(t, c.e, c.f) == (c.h, c.g)
    for x in range(4):
        assert divide(t, x, x) == (x, x)
    r1 = fixtures["table1"]
    fef = r1.table.index("fef")
    assert divide(r1.table, fef, r1.ctx.e)[0] == r1.ctx.f
    with pytest.raises(DivisionError):
        divide(left_projection(3), 0, 1)


def test_rm_violations(fixtures, t4):
    for rec in fixtures.values():
        assert count_rm_violations(rec.table) == 0
    assert count_rm_violations(left_projection(2)) == 4
    swapped = swap_entries(t4.table, 0, 1, 2)
    assert count_rm_violations(swapped) > 0


def test_swap_of_spec_entries(t4):
    # the (0,1) and (1,0) entries exchanged, as a table edit
    rows = [list(r) for r in t4.table.product]
    rows[0][1], rows[1][0] = rows[1][0], rows[0][1]
    t = CayleyTable.from_rows(rows)
    naive = sum(
        t.mul(t.mul(x, y), z) != t.mul(t.mul(z, y), x) for x in range(4) for y in range(4) for z in range(4)
    )
    assert count_rm_violations(t) == naive == 20


def test_relabel_preserves_battery(fixtures):
    rng = np.random.default_rng(3)
    t = fixtures["table7"].table
    perm = [int(v) for v in rng.permutation(t.order)]
    r = t.relabel(perm)
    assert all(perm[t.mul(a, b)] == r.mul(perm[a], perm[b]) for a in range(t.order) for b in range(t.order))
    assert check_identities(r).all_pass


def test_commutative():
    assert is_commutative(left_projection(1))
    assert not is_commutative(left_projection(2))
