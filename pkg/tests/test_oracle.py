from itertools import product

import pytest
from hypothesis import given, strategies as st

from wquasi.fixtures import load_fixture
from wquasi.groupoid import CayleyTable, check_identities, is_one_step
from wquasi.iso import canonical_form, extend_pair, find_isomorphism
from wquasi.oracle import (
    NoSuchAutomorphism,
    SearchCapError,
    SearchSpec,
    affine_model,
    brute_force_models,
    norm,
    phi_roots,
    predicted_order,
    relation_element,
)
from wquasi.word import parse

IRM = frozenset({"idempotent", "right_modular"})


def naive_models(n, names):
    """Every table of order n, filtered by the battery, one per isomorphism class."""
    seen = set()
    for flat in product(range(n), repeat=n * n):
        t = CayleyTable.from_rows([flat[i * n:(i + 1) * n] for i in range(n)])
        rep = check_identities(t)
        if all(getattr(rep, k) for k in names):
            seen.add(canonical_form(t))
    return seen


def test_examples():
    assert len(brute_force_models(SearchSpec(1, IRM))) == 1
    assert brute_force_models(SearchSpec(2, frozenset({"idempotent", "latin_square"}))) == []
    full = brute_force_models(SearchSpec(4, IRM | {"latin_square", "one_step"}))
    assert len(full) == 1
    assert find_isomorphism(load_fixture("t4").table, full[0])


@pytest.mark.parametrize("n", [1, 2, 3])
def test_matches_naive_enumeration(n):
    got = {canonical_form(t) for t in brute_force_models(SearchSpec(n, IRM))}
    assert got == naive_models(n, IRM)


def test_counts_up_to_order_4():
    # frozen; orders 1-3 are re-derived by the naive enumeration above
    assert [len(brute_force_models(SearchSpec(n, IRM))) for n in range(1, 5)] == [1, 1, 2, 6]


def test_results_satisfy_spec_and_are_distinct():
    spec = SearchSpec(4, IRM)
    models = brute_force_models(spec)
    assert len({canonical_form(t) for t in models}) == len(models)
    for t in models:
        rep = check_identities(t)
        assert rep.idempotent and rep.right_modular


def test_relation_filter():
    spec = SearchSpec(4, IRM | {"latin_square"}, parse("(f g)"))
    assert len(brute_force_models(spec)) == 1
    assert brute_force_models(SearchSpec(3, IRM | {"latin_square"}, parse("(f g)"))) == []


def test_parallel_equals_serial():
    spec = SearchSpec(4, IRM)
    assert brute_force_models(spec, jobs=2) == brute_force_models(spec)


def test_spec_validation():
    with pytest.raises(SearchCapError):
        brute_force_models(SearchSpec(7, IRM))
    with pytest.raises(ValueError):
        SearchSpec(3, frozenset({"associative"}))
    with pytest.raises(ValueError):
        SearchSpec(0)


def test_affine_mod_5_is_table1():
    t = affine_model(5, 2)
    assert check_identities(t).all_pass and is_one_step(t)
    assert find_isomorphism(t, load_fixture("table1").table)


def test_mod_7_has_no_phi():
    assert phi_roots(7) == []
    for t in range(7):
        with pytest.raises(NoSuchAutomorphism):
            affine_model(7, t)


def test_mod_19_pair():
    assert phi_roots(19) == [4, 14]
    a, b = affine_model(19, 4), affine_model(19, 14)
    assert check_identities(a).all_pass and check_identities(b).all_pass
    assert not find_isomorphism(a, b)
    t9, t10 = load_fixture("table9").table, load_fixture("table10").table
    assert find_isomorphism(b, t9) and find_isomorphism(a, t10)


def test_mod_11_identifications():
    assert phi_roots(11) == [3, 7]
    assert find_isomorphism(affine_model(11, 3), load_fixture("table2").table)
    assert find_isomorphism(affine_model(11, 7), load_fixture("table8").table)


def test_mod_29():
    t = affine_model(29, 5)
    assert check_identities(t).all_pass and is_one_step(t)
    assert find_isomorphism(affine_model(29, 23), load_fixture("table3_5").table)


def test_matrix_phi_gives_table6():
    t = affine_model(4, [[0, 1], [1, -1]])
    assert t.order == 16 and check_identities(t).all_pass and not is_one_step(t)
    rec = load_fixture("table6")
    assert any(extend_pair(rec.table, t, (rec.ctx.e, rec.ctx.f), (0, y)) for y in range(1, 16))


def test_affine_errors():
    with pytest.raises(NoSuchAutomorphism):
        affine_model(5, 3)
    with pytest.raises(ValueError):
        affine_model(5, [[1, 0]])
    with pytest.raises(ValueError):
        affine_model(0, 1)


@given(st.sampled_from([5, 11, 19, 29, 31, 41, 59, 61, 71]), st.data())
def test_prime_affine_models_are_one_step(p, data):
    roots = phi_roots(p)
    assert roots
    t = affine_model(p, data.draw(st.sampled_from(roots)))
    assert check_identities(t).all_pass and is_one_step(t)


def test_norm_oracle():
    assert relation_element(parse("f")) == (1, 0)
    assert relation_element(parse("g")) == (1, -1)
    assert norm((1, 0)) == 1
    assert [predicted_order(parse(w)) for w in ["(f g)", "((f g) f)", "(f (f g))", "(f (f (f g)))"]] == [4, 5, 11, 29]
