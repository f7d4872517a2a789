import hashlib
import json

import pytest

from wquasi.fixtures import (
    FIXTURE_IDS,
    TableFile,
    TableFileError,
    fixture_text,
    load_fixture,
    parse_table_text,
    read_table,
    render_table_text,
    table_from_json,
    table_to_json,
    write_table,
)
from wquasi.groupoid import check_identities
from wquasi.word import evaluate

SHA256 = {
    "t4": "10b78cdb591261ce077d0cf4721b053e6ea1d91f1485d43a71defc216602e7e7",
    "table1": "5c7d817a84c8cd3745921358d77fbc0255d6d4a34978144d5fee9237a4c31f75",
    "table2": "f8617aa7b74bd680e8b35aa1340e14fbe67a497e2e49e24ad8d704ccf3bdf517",
    "table3_5": "53a61ce08379bcdd7828bbfcf5c45c9e656ceedb18576786285938ba537cff63",
    "table6": "c339443116bfc51514b8eec18d4e73ff05af7c6b0d25b57640d436af78189006",
    "table7": "4916398318257f9646101f3db1855904cd039719ce4faeb5df0a4106994746f4",
    "table8": "7a3c8daa918b1219def3bd2f744fc8f1437ce7edc02223f06b8a8046a20ec5f4",
    "table9": "e3ac11b0c72f27df77212ab0ff3dc9f3b7ee5b934d7e5b3c1f1135b29b44e84f",
    "table10": "d1ac8afc412a78e9339b50d06eb0bf642e05d29f3ebddb7fc2f2b34e29570970",
}

ORDERS = {"t4": 4, "table1": 5, "table2": 11, "table3_5": 29, "table6": 16, "table7": 9, "table8": 11, "table9": 19, "table10": 19}

TABLE1_TEXT = """# wqt v1
order: 5
labels: e f ef fe fef
e: 0
f: 1
relation: ((f g) f)
table:
0 2 1 4 3
3 1 4 0 2
4 3 2 1 0
2 4 0 3 1
1 0 3 2 4
"""


def test_ids():
    assert set(FIXTURE_IDS) == set(SHA256)


@pytest.mark.parametrize("fid", FIXTURE_IDS)
def test_checksum_pinned(fid):
    assert hashlib.sha256(fixture_text(fid).encode("utf-8")).hexdigest() == SHA256[fid]


@pytest.mark.parametrize("fid", FIXTURE_IDS)
def test_fixture_record(fid):
    rec = load_fixture(fid)
    assert rec.table.order == ORDERS[fid] == rec.claimed_order
    assert evaluate(rec.relation, rec.table, rec.ctx) == rec.ctx.e
    assert check_identities(rec.table).all_pass


def test_examples():
    t4 = load_fixture("t4")
    assert t4.table.order == 4 and t4.relation.render() == "(f g)"
    t2 = load_fixture("table2")
    assert t2.table.order == 11 and t2.claimed_dimension == 3 and t2.relation.render() == "(f (f g))"
    # element 11 when counting from 1
    assert t2.ctx.f == 10
    t35 = load_fixture("table3_5")
    assert t35.table.order == 29 and t35.relation.render() == "(f (f (f g)))"


def test_unknown_fixture():
    with pytest.raises(KeyError):
        load_fixture("table11")


def test_table1_format_exact():
    assert fixture_text("table1") == TABLE1_TEXT


@pytest.mark.parametrize("fid", FIXTURE_IDS)
def test_text_roundtrip(fid):
    text = fixture_text(fid)
    assert render_table_text(parse_table_text(text)) == text


@pytest.mark.parametrize("fid", FIXTURE_IDS)
def test_json_roundtrip(fid, tmp_path):
    tf = load_fixture(fid).table_file
    data = json.loads(json.dumps(table_to_json(tf)))
    assert table_from_json(data) == tf
    path = tmp_path / f"{fid}.json"
    write_table(path, tf, as_json=True)
    assert read_table(path) == tf


def test_write_read(tmp_path):
    tf = load_fixture("table7").table_file
    path = tmp_path / "t.wqt"
    write_table(path, tf)
    assert read_table(path) == tf


@pytest.mark.parametrize(
    "text,fragment,line",
    [
        ("order: 1\n", "header", 1),
        ("# wqt v1\norder: 2\ne: 0\nf: 1\n", "'table'", None),
        ("# wqt v1\norder: 2\ne: 0\ntable:\n0 1\n1 0\n", "'f'", None),
        ("# wqt v1\norder: 2\ne: 0\nf: 1\ncolour: red\ntable:\n0 1\n1 0\n", "unknown key", 5),
        ("# wqt v1\norder: 2\ne: 0\nf: 1\ntable:\n0 x\n1 0\n", "non-integer", 6),
        ("# wqt v1\norder: 3\ne: 0\nf: 1\ntable:\n0 1\n1 0\n", "rows", None),
        ("# wqt v1\norder: 2\ne: 0\nf: 5\ntable:\n0 1\n1 0\n", "out of range", None),
        ("# wqt v1\norder: 2\ne: 0\nf: 1\ntable:\n0 2\n1 0\n", "not an element", None),
        ("# wqt v1\norder: 2\ne: 0\nf: 1\nrelation: (f\ntable:\n0 1\n1 0\n", "end of input", None),
    ],
)
def test_format_errors(text, fragment, line):
    with pytest.raises(TableFileError) as info:
        parse_table_text(text, "x.wqt")
    assert fragment in str(info.value)
    assert str(info.value).startswith("x.wqt")
    assert info.value.line == line


def test_missing_file_has_path(tmp_path):
    with pytest.raises(TableFileError) as info:
        read_table(tmp_path / "nope.wqt")
    assert "nope.wqt" in str(info.value)


def test_labels_optional():
    tf = parse_table_text("# wqt v1\norder: 2\ne: 0\nf: 1\ntable:\n0 1\n1 0\n")
    assert tf.table.labels == ("0", "1") and tf.relation is None
    assert isinstance(tf, TableFile)
