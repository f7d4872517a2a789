"""Embedded Cayley tables and the ``wqt v1`` table file format."""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional, Union

from .groupoid import CayleyTable, GeneratorContext, TableError
from .word import Word, WordSyntaxError, parse

MAGIC = "# wqt v1"


class TableFileError(ValueError):
    def __init__(self, message: str, source: str = "<string>", line: Optional[int] = None):
        where = source if line is None else f"{source}:{line}"
        super().__init__(f"{where}: {message}")
        self.source = source
        self.line = line


@dataclass(frozen=True)
class TableFile:
    table: CayleyTable
    e: int
    f: int
    relation: Optional[Word] = None

    @property
    def ctx(self) -> GeneratorContext:
        return GeneratorContext.from_table(self.table, self.e, self.f)


def parse_table_text(text: str, source: str = "<string>") -> TableFile:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0].rstrip() != MAGIC:
        raise TableFileError(f"missing {MAGIC!r} header", source, 1)
    fields: dict[str, str] = {}
    rows: list[list[int]] = []
    in_table = False
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.rstrip("\r")
        if in_table:
            if not line.strip():
                continue
            try:
                rows.append([int(tok) for tok in line.split()])
            except ValueError:
                raise TableFileError(f"non-integer entry in row {line!r}", source, lineno) from None
            continue
        if not line.strip() or line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise TableFileError(f"expected 'key: value', got {line!r}", source, lineno)
        key = key.strip()
        if key == "table":
            in_table = True
            continue
        if key not in ("order", "labels", "e", "f", "relation"):
            raise TableFileError(f"unknown key {key!r}", source, lineno)
        fields[key] = value.strip()

    for required in ("order", "e", "f"):
        if required not in fields:
            raise TableFileError(f"missing required key {required!r}", source)
    if not in_table:
        raise TableFileError("missing required key 'table'", source)
    try:
        order = int(fields["order"])
        e = int(fields["e"])
        f = int(fields["f"])
    except ValueError as exc:
        raise TableFileError(str(exc), source) from None
    if len(rows) != order:
        raise TableFileError(f"order is {order} but the table has {len(rows)} rows", source)
    labels = tuple(fields["labels"].split()) if "labels" in fields else ()
    try:
        table = CayleyTable.from_rows(rows, labels)
    except TableError as exc:
        raise TableFileError(str(exc), source) from None
    if not (0 <= e < order and 0 <= f < order):
        raise TableFileError(f"generators e={e}, f={f} out of range", source)
    relation = None
    if fields.get("relation"):
        try:
            relation = parse(fields["relation"])
        except WordSyntaxError as exc:
            raise TableFileError(str(exc), source) from None
    return TableFile(table, e, f, relation)


def render_table_text(tf: TableFile) -> str:
    t = tf.table
    out = [MAGIC, f"order: {t.order}", "labels: " + " ".join(t.labels), f"e: {tf.e}", f"f: {tf.f}"]
    if tf.relation is not None:
        out.append(f"relation: {tf.relation.render()}")
    out.append("table:")
    out.extend(" ".join(str(v) for v in row) for row in t.product)
    return "\n".join(out) + "\n"


def table_to_json(tf: TableFile) -> dict:
    return {
        "format": "wqt v1",
        "order": tf.table.order,
        "labels": list(tf.table.labels),
        "e": tf.e,
        "f": tf.f,
        "relation": tf.relation.render() if tf.relation is not None else None,
        "table": [list(r) for r in tf.table.product],
    }


def table_from_json(data: dict) -> TableFile:
    table = CayleyTable.from_rows(data["table"], data.get("labels") or ())
    if table.order != data["order"]:
        raise TableFileError("order does not match the table", "<json>")
    rel = data.get("relation")
    return TableFile(table, int(data["e"]), int(data["f"]), parse(rel) if rel else None)


def read_table(path: Union[str, Path]) -> TableFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise TableFileError(exc.strerror or str(exc), str(path)) from None
    if text.lstrip().startswith("{"):
        try:
            return table_from_json(json.loads(text))
        except (KeyError, TypeError, ValueError) as exc:
            raise TableFileError(f"bad JSON table: {exc}", str(path)) from None
    return parse_table_text(text, str(path))


def write_table(path: Union[str, Path], tf: TableFile, as_json: bool = False) -> None:
    path = Path(path)
    if as_json:
        path.write_text(json.dumps(table_to_json(tf), indent=1) + "\n", encoding="utf-8")
    else:
        path.write_bytes(render_table_text(tf).encode("utf-8"))


@dataclass(frozen=True)
class FixtureRecord:
    id: str
    table: CayleyTable
    ctx: GeneratorContext
    relation: Word
    claimed_dimension: int
    claimed_order: int
    note: str = ""

    @property
    def table_file(self) -> TableFile:
        return TableFile(self.table, self.ctx.e, self.ctx.f, self.relation)


# id -> (claimed dimension, claimed order, note)
_REGISTRY = {
    "t4": (2, 4, "the order-4 model of e = fg"),
    "table1": (3, 5, ""),
    "table2": (3, 11, "f is element 10 counting from 0, the product e.efe"),
    "table3_5": (4, 29, "one order-29 table assembled from three column blocks"),
    "table6": (4, 16, "f is not labelled; element 15 counting from 0 fits f.f = f, f.e = fe and e.f = ef"),
    "table7": (4, 9, ""),
    "table8": (4, 11, ""),
    "table9": (4, 19, ""),
    "table10": (4, 19, ""),
}

FIXTURE_IDS = tuple(_REGISTRY)


def fixture_text(fid: str) -> str:
    if fid not in _REGISTRY:
        raise KeyError(f"unknown fixture {fid!r}; known: {', '.join(FIXTURE_IDS)}")
    return resources.files("wquasi").joinpath("data", f"{fid}.wqt").read_text(encoding="utf-8")


def load_fixture(fid: str) -> FixtureRecord:
    text = fixture_text(fid)
    tf = parse_table_text(text, f"{fid}.wqt")
    dim, order, note = _REGISTRY[fid]
    return FixtureRecord(fid, tf.table, tf.ctx, tf.relation, dim, order, note)


def all_fixtures() -> list[FixtureRecord]:
    return [load_fixture(fid) for fid in FIXTURE_IDS]
