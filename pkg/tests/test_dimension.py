import pytest
from hypothesis import given, strategies as st

from wquasi.dimension import DimensionError, dimension, dimension_all_pairs
from wquasi.fixtures import FIXTURE_IDS, load_fixture
from wquasi.groupoid import GeneratorContext, left_projection, trivial_table
from wquasi.word import enumerate_words, evaluate, parse

CLAIMED = {"t4": 2, "table1": 3, "table2": 3, "table3_5": 4, "table6": 4, "table7": 4, "table8": 4, "table9": 4, "table10": 4}


def brute_dimension(t, ctx, cap=6):
    for k in range(1, cap + 1):
        for w in enumerate_words(k):
            if evaluate(w, t, ctx) == ctx.e:
                return k
    return None


@pytest.mark.parametrize("fid", FIXTURE_IDS)
def test_fixture_dimension(fid):
    rec = load_fixture(fid)
    rep = dimension(rec.table, rec.ctx)
    assert rep.value == CLAIMED[fid] == rec.claimed_dimension
    assert rep.witness.length == rep.value
    assert evaluate(rep.witness, rec.table, rec.ctx) == rec.ctx.e
    assert brute_dimension(rec.table, rec.ctx) == rep.value


def test_t4_witness():
    rec = load_fixture("t4")
    assert dimension(rec.table, rec.ctx).witness.render() == "(f g)"


def test_table1_witness_tie_break():
    rec = load_fixture("table1")
    rep = dimension(rec.table, rec.ctx)
    # least left-factor level first: f * (g f) beats (f g) * f
    assert rep.witness.render() == "(f (g f))"
    assert evaluate(parse("((f g) f)"), rec.table, rec.ctx) == rec.ctx.e


def test_all_pairs_t4():
    rep = dimension_all_pairs(load_fixture("t4").table)
    assert len(rep.per_pair) == 12 and set(rep.per_pair.values()) == {2}
    assert rep.uniform


def test_all_pairs_table2():
    rep = dimension_all_pairs(load_fixture("table2").table)
    assert len(rep.per_pair) == 110
    assert (rep.minimum, rep.maximum) == (3, 3)


@pytest.mark.parametrize("fid", ["table1", "table7", "table8", "table9", "table10", "table3_5"])
def test_all_pairs_uniform_on_fixtures(fid):
    rec = load_fixture(fid)
    rep = dimension_all_pairs(rec.table)
    assert rep.minimum == rep.maximum == rec.claimed_dimension


@given(st.sampled_from(["table1", "table2", "table7", "table9"]), st.data())
def test_dp_matches_brute_force_on_random_pairs(fid, data):
    t = load_fixture(fid).table
    e = data.draw(st.integers(0, t.order - 1))
    f = data.draw(st.integers(0, t.order - 1).filter(lambda v: v != e))
    ctx = GeneratorContext.from_table(t, e, f)
    rep = dimension(t, ctx)
    assert brute_dimension(t, ctx) == rep.value
    assert evaluate(rep.witness, t, ctx) == e


def test_rejections():
    with pytest.raises(DimensionError):
        dimension_all_pairs(trivial_table())
    lp = left_projection(3)
    with pytest.raises(DimensionError):
        dimension(lp, GeneratorContext.from_table(lp, 0, 1))
    with pytest.raises(DimensionError):
        dimension_all_pairs(load_fixture("table6").table)


def test_pair_inside_a_proper_subtable():
    # in table6 the pair (0, 3) generates 4 elements; e is still reached
    t = load_fixture("table6").table
    ctx = GeneratorContext.from_table(t, 0, 3)
    assert dimension(t, ctx).value == brute_dimension(t, ctx)
