"""Command-line front end: ``wquasi <subcommand> ...``.

Exit codes: 0 all requested checks passed, 1 a property check failed,
2 usage or file error, 3 the element budget was exceeded.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import census as census_mod
from .closure import DEFAULT_BUDGET, DEFAULT_MAX_ROUNDS, BudgetExceeded, Degenerate, construct
from .dimension import DimensionError, dimension, dimension_all_pairs
from .fixtures import FIXTURE_IDS, TableFile, TableFileError, fixture_text, load_fixture, read_table, render_table_text, table_to_json, write_table
from .groupoid import IDENTITY_NAMES, TableError, check_identities, is_one_step
from .iso import NotTwoGeneratedError, canonical_form, find_isomorphism, pointed_isomorphism
from .oracle import SEARCHABLE, NoSuchAutomorphism, SearchCapError, SearchSpec, affine_model, brute_force_models, phi_roots
from .rmtester import PROBABILITY_MODEL, SamplePlan, detection_curve, perturb, sample_rm
from .word import WordSyntaxError, evaluate, parse

OK, FAILED, USAGE, BUDGET = 0, 1, 2, 3


@dataclass(frozen=True)
class CommandResult:
    code: int
    report: str


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _emit(args, data: dict, lines: list[str]) -> str:
    if getattr(args, "json", False):
        return json.dumps(data, indent=1, default=str)
    return "\n".join(lines)


def _load(source: str) -> tuple[TableFile, Optional[int]]:
    """A table file path, or ``fixture:<id>``; also returns the claimed dimension."""
    if source.startswith("fixture:"):
        rec = load_fixture(source.split(":", 1)[1])
        return rec.table_file, rec.claimed_dimension
    return read_table(source), None


def _cex(value) -> str:
    return "-" if value is None else " ".join(map(str, value))


# -- verify ------------------------------------------------------------------

def _verify_data(tf: TableFile, claimed: Optional[int]) -> tuple[bool, dict, list[str]]:
    t = tf.table
    report = check_identities(t)
    data: dict = {"order": t.order, "identities": {}, "counterexamples": {}}
    lines = [f"order {t.order}"]
    for name in IDENTITY_NAMES:
        ok = getattr(report, name)
        data["identities"][name] = ok
        cex = report.counterexamples.get(name)
        data["counterexamples"][name] = list(cex) if cex is not None else None
        lines.append(f"  {name:<20} {'ok' if ok else 'FAIL'}" + ("" if ok else f"  counterexample: {_cex(cex)}"))
    passed = report.all_pass
    one = is_one_step(t)
    data["one_step"] = bool(one)
    if one:
        lines.append("  one_step             ok")
    else:
        x, y, s = one.witness
        data["one_step_witness"] = [x, y, sorted(s)]
        lines.append(f"  one_step             FAIL  elements {x}, {y} generate {len(s)} of {t.order}")
        passed = False
    ctx = tf.ctx
    if tf.relation is not None:
        val = evaluate(tf.relation, t, ctx)
        ok = val == ctx.e
        data["relation"] = {"word": tf.relation.render(), "value": val, "holds": ok}
        lines.append(f"  relation {tf.relation.render()} = {t.label(val)}  {'ok' if ok else 'FAIL (expected e)'}")
        passed &= ok
    try:
        dim = dimension(t, ctx)
        data["dimension"] = dim.value
        data["dimension_witness"] = dim.witness.render()
        line = f"  dimension {dim.value}  witness {dim.witness.render()}"
        if claimed is not None:
            ok = dim.value == claimed
            data["claimed_dimension"] = claimed
            line += "  ok" if ok else f"  FAIL (claimed {claimed})"
            passed &= ok
        lines.append(line)
    except DimensionError as exc:
        data["dimension"] = None
        lines.append(f"  dimension unavailable: {exc}")
        if claimed is not None:
            passed = False
    data["passed"] = passed
    lines.append("PASS" if passed else "FAIL")
    return passed, data, lines


def cmd_verify(args) -> CommandResult:
    tf, claimed = _load(args.source)
    if args.dimension is not None:
        claimed = args.dimension
    passed, data, lines = _verify_data(tf, claimed)
    data["source"] = args.source
    return CommandResult(OK if passed else FAILED, _emit(args, data, [args.source] + lines))


# -- construct ---------------------------------------------------------------

def cmd_construct(args) -> CommandResult:
    w = parse(args.relation)
    out = construct(w, budget=args.budget, max_rounds=args.max_rounds, trace=args.trace)
    data: dict = {"relation": w.render(), "budget": args.budget}
    if isinstance(out, BudgetExceeded):
        data.update(outcome="budget-exceeded", elements_reached=out.elements_reached, rounds=out.rounds)
        lines = [f"{w.render()}: budget exceeded ({out.elements_reached} classes > {out.budget}, {out.rounds} rounds)"]
        return CommandResult(BUDGET, _emit(args, data, lines))
    trace_lines: list[str] = []
    if args.trace:
        trace_lines = [f"  {ev.rule}: {ev.merged[0]} = {ev.merged[1]}  {ev.instance}" for ev in out.trace]
        data["trace"] = trace_lines
    if isinstance(out, Degenerate):
        data.update(outcome="degenerate", reason=out.reason, detail=out.detail)
        if out.table is not None:
            data["order"] = out.table.order
        lines = [f"{w.render()}: degenerate ({out.reason}): {out.detail}"] + trace_lines
        return CommandResult(FAILED, _emit(args, data, lines))
    tf = TableFile(out.table, out.ctx.e, out.ctx.f, w)
    data.update(outcome="success", order=out.order, dimension=out.dimension, table=table_to_json(tf),
                term_names={str(k): v for k, v in out.term_names.items()})
    lines = [f"{w.render()}: order {out.order}, dimension {out.dimension}"]
    lines += [f"  {k:>3}  {v}" for k, v in sorted(out.term_names.items())]
    lines += trace_lines
    if args.out:
        write_table(args.out, tf, as_json=str(args.out).endswith(".json"))
        lines.append(f"wrote {args.out}")
    else:
        lines.append(render_table_text(tf).rstrip("\n"))
    return CommandResult(OK, _emit(args, data, lines))


# -- dimension ---------------------------------------------------------------

def cmd_dimension(args) -> CommandResult:
    tf, _ = _load(args.source)
    try:
        if args.all_pairs:
            rep = dimension_all_pairs(tf.table)
            data = {
                "minimum": rep.minimum,
                "maximum": rep.maximum,
                "uniform": rep.uniform,
                "per_pair": {f"{x},{y}": v for (x, y), v in sorted(rep.per_pair.items())},
            }
            lines = [f"dimension over {len(rep.per_pair)} pairs: min {rep.minimum}, max {rep.maximum}"
                     + (" (uniform)" if rep.uniform else "")]
        else:
            rep = dimension(tf.table, tf.ctx)
            data = {"dimension": rep.value, "witness": rep.witness.render()}
            lines = [f"dimension {rep.value}  witness {rep.witness.render()}"]
    except DimensionError as exc:
        return CommandResult(FAILED, _emit(args, {"error": str(exc)}, [f"dimension unavailable: {exc}"]))
    return CommandResult(OK, _emit(args, data, lines))


# -- census ------------------------------------------------------------------

def cmd_census(args) -> CommandResult:
    rep = census_mod.run_census(args.n, budget=args.budget, jobs=args.jobs, max_rounds=args.max_rounds)
    tags = census_mod.identity_tags(rep)
    counts = rep.counts()
    m_text = "none" if rep.M is None else f"{rep.M}" + (" (lower bound)" if rep.M_is_lower_bound else "")
    lines = [
        f"n = {rep.n}: {rep.total_words} words",
        "  " + ", ".join(f"{k} {v}" for k, v in counts.items()),
        f"  genuine classes {len(rep.classes)}, orders {rep.orders}, M({rep.n}) = {m_text}",
        f"  classes up to plain isomorphism {len(rep.plain_classes)}",
    ]
    classes = []
    for i, c in enumerate(rep.classes):
        tag = "; ".join(tags.get(i, []))
        lines.append(f"  class {i}: order {c.order}  {' '.join(w.render() for w in c.words)}" + (f"  [{tag}]" if tag else ""))
        classes.append({"order": c.order, "words": [w.render() for w in c.words], "identities": tags.get(i, [])})
    for v in rep.verdicts:
        if v.kind == census_mod.BUDGET:
            lines.append(f"  budget exceeded: {v.word.render()} ({v.reason})")
    if args.verbose:
        for v in rep.verdicts:
            extra = v.witness.render() if v.witness is not None else v.reason
            lines.append(f"    {v.word.render():<28} {v.kind:<16} {v.order or '':>4} {extra}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for i, c in enumerate(rep.classes):
            write_table(out / f"n{rep.n}_class{i}_order{c.order}.wqt", TableFile(c.table, c.ctx.e, c.ctx.f, c.representative))
        lines.append(f"wrote {len(rep.classes)} tables to {out}")
    data = {
        "n": rep.n,
        "total_words": rep.total_words,
        "counts": counts,
        "orders": rep.orders,
        "M": rep.M,
        "M_is_lower_bound": rep.M_is_lower_bound,
        "budget": rep.budget,
        "classes": classes,
        "plain_classes": [list(g) for g in rep.plain_classes],
        "budget_hits": [w.render() for w in rep.budget_hits],
        "verdicts": [
            {"word": v.word.render(), "kind": v.kind, "order": v.order, "dimension": v.dimension,
             "witness": v.witness.render() if v.witness is not None else None, "reason": v.reason}
            for v in rep.verdicts
        ],
    }
    return CommandResult(BUDGET if rep.budget_hits else OK, _emit(args, data, lines))


# -- iso ---------------------------------------------------------------------

def cmd_iso(args) -> CommandResult:
    a, _ = _load(args.a)
    b, _ = _load(args.b)
    if args.pointed:
        res = pointed_isomorphism(a.table, a.ctx, b.table, b.ctx)
        mapping, examined = res.mapping, res.pairs_examined
    else:
        try:
            res = find_isomorphism(a.table, b.table)
            mapping, examined = res.mapping, res.pairs_examined
        except NotTwoGeneratedError:
            if a.table.order > 7:
                raise NotTwoGeneratedError("the first table is not one-step; use --pointed or a table of order at most 7") from None
            # small and not one-step: compare canonical forms instead
            same = canonical_form(a.table) == canonical_form(b.table)
            data = {"isomorphic": same, "method": "canonical form"}
            return CommandResult(OK if same else FAILED, _emit(args, data, [f"isomorphic: {same} (canonical form)"]))
    found = mapping is not None
    data = {"isomorphic": found, "mapping": list(mapping) if found else None, "pairs_examined": examined,
            "pointed": args.pointed}
    lines = [f"isomorphic: {found}  ({examined} generator pairs examined)"]
    if found:
        lines.append("  map: " + " ".join(f"{x}->{y}" for x, y in enumerate(mapping)))
    return CommandResult(OK if found else FAILED, _emit(args, data, lines))


# -- oracle ------------------------------------------------------------------

def _parse_phi(text: str):
    if ";" in text or "," in text:
        return [[int(v) for v in row.split(",")] for row in text.split(";")]
    return int(text)


def cmd_oracle_search(args) -> CommandResult:
    ids = [s.strip() for s in ",".join(args.identities).split(",") if s.strip()]
    rel = parse(args.relation) if args.relation else None
    models = brute_force_models(SearchSpec(args.order, frozenset(ids), rel), jobs=args.jobs)
    lines = [f"order {args.order}, {', '.join(sorted(ids)) or 'no identities'}: {len(models)} model(s) up to isomorphism"]
    for i, m in enumerate(models):
        lines.append(f"  model {i}:")
        lines.extend("    " + " ".join(map(str, r)) for r in m.product)
    data = {"order": args.order, "identities": sorted(ids), "relation": rel.render() if rel else None,
            "count": len(models), "models": [[list(r) for r in m.product] for m in models]}
    return CommandResult(OK, _emit(args, data, lines))


def cmd_oracle_affine(args) -> CommandResult:
    if args.phi is None:
        roots = phi_roots(args.mod)
        data = {"modulus": args.mod, "phi_roots": roots}
        lines = [f"phi^2 + phi = 1 mod {args.mod}: " + (", ".join(map(str, roots)) if roots else "no solution")]
        return CommandResult(OK if roots else FAILED, _emit(args, data, lines))
    try:
        t = affine_model(args.mod, _parse_phi(args.phi))
    except NoSuchAutomorphism as exc:
        return CommandResult(FAILED, _emit(args, {"modulus": args.mod, "phi": args.phi, "error": str(exc)}, [str(exc)]))
    tf = TableFile(t, 0, 1 if t.order > 1 else 0)
    passed, data, lines = _verify_data(tf, None)
    data.update(modulus=args.mod, phi=args.phi, table=table_to_json(tf))
    if args.out:
        write_table(args.out, tf, as_json=str(args.out).endswith(".json"))
        lines.append(f"wrote {args.out}")
    return CommandResult(OK if passed else FAILED, _emit(args, data, [f"affine model mod {args.mod}, phi {args.phi}"] + lines))


# -- sample-rm ---------------------------------------------------------------

def cmd_sample_rm(args) -> CommandResult:
    tf, _ = _load(args.source)
    t = tf.table
    if args.swaps:
        t = perturb(t, args.swaps, np.random.default_rng(args.seed))
    res = sample_rm(t, SamplePlan(args.samples, args.seed, args.swaps))
    data: dict = {
        "model": PROBABILITY_MODEL,
        "swaps": args.swaps,
        "samples": res.samples,
        "violations": res.violations,
        "estimate": res.estimate,
        "exact_count": res.exact_count,
        "exact_fraction": res.exact_fraction,
    }
    lines = [
        f"probability model: {PROBABILITY_MODEL}",
        f"{res.samples} samples, {res.violations} violations (estimate {res.estimate:.4f}; exact {res.exact_count}/{t.order ** 3} = {res.exact_fraction:.4f})",
    ]
    passed = not res.detected
    if args.trials:
        curve = detection_curve(t, args.ks, args.trials, args.seed)
        data["curve"] = [
            {"k": c.k, "predicted": c.predicted, "empirical": c.empirical, "trials": c.trials, "sigma": c.sigma,
             "within_3_sigma": c.within_3_sigma}
            for c in curve
        ]
        for c in curve:
            lines.append(f"  k={c.k:<5} predicted {c.predicted:.4f}  empirical {c.empirical:.4f}  sigma {c.sigma:.4f}"
                         + ("" if c.within_3_sigma else "  OUTSIDE 3 sigma"))
        passed &= all(c.within_3_sigma for c in curve)
        if args.csv:
            with open(args.csv, "w", newline="", encoding="utf-8") as fh:
                wr = csv.writer(fh)
                wr.writerow(["k", "predicted", "empirical", "trials", "sigma", "within_3_sigma"])
                for c in curve:
                    wr.writerow([c.k, c.predicted, c.empirical, c.trials, c.sigma, c.within_3_sigma])
            lines.append(f"wrote {args.csv}")
    return CommandResult(OK if passed else FAILED, _emit(args, data, lines))


# -- fixtures ----------------------------------------------------------------

def cmd_fixtures(args) -> CommandResult:
    if args.action == "list":
        recs = [load_fixture(fid) for fid in FIXTURE_IDS]
        data = {"fixtures": [{"id": r.id, "order": r.table.order, "dimension": r.claimed_dimension,
                              "relation": r.relation.render(), "note": r.note} for r in recs]}
        lines = [f"{r.id:<9} order {r.table.order:>2}  dimension {r.claimed_dimension}  {r.relation.render():<22} {r.note}".rstrip()
                 for r in recs]
        return CommandResult(OK, _emit(args, data, lines))
    if not args.id:
        raise UsageError("fixtures dump: a fixture id is required")
    rec = load_fixture(args.id)
    if args.out:
        write_table(args.out, rec.table_file, as_json=args.json or str(args.out).endswith(".json"))
        return CommandResult(OK, f"wrote {args.out}")
    if args.json:
        return CommandResult(OK, json.dumps(table_to_json(rec.table_file), indent=1))
    return CommandResult(OK, fixture_text(args.id).rstrip("\n"))


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="wquasi", description="Workbench for one-step idempotent right-modular quasigroups.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, **kw):
        sp = sub.add_parser(name, **kw)
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.set_defaults(fn=fn)
        return sp

    sp = add("verify", cmd_verify, help="identity battery, one-step, relation and dimension")
    sp.add_argument("source", help="table file (wqt or JSON) or fixture:<id>")
    sp.add_argument("--dimension", type=int, help="claimed dimension to check")

    sp = add("construct", cmd_construct, help="build the model forced by e = w")
    sp.add_argument("--relation", required=True)
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp.add_argument("--max-rounds", type=int, default=DEFAULT_MAX_ROUNDS)
    sp.add_argument("--out")
    sp.add_argument("--trace", action="store_true")

    sp = add("dimension", cmd_dimension, help="least length of a word for e")
    sp.add_argument("source")
    sp.add_argument("--all-pairs", action="store_true")

    sp = add("census", cmd_census, help="classify every relation word of length n")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp.add_argument("--max-rounds", type=int, default=DEFAULT_MAX_ROUNDS)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--out", help="directory for one table file per genuine class")
    sp.add_argument("--verbose", action="store_true", help="list every word")

    sp = add("iso", cmd_iso, help="isomorphism test")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--pointed", action="store_true", help="require e -> e and f -> f")

    sp = sub.add_parser("oracle", help="brute-force search and affine models")
    osub = sp.add_subparsers(dest="oracle_command", required=True, parser_class=_Parser)
    op = osub.add_parser("search")
    op.add_argument("--json", action="store_true")
    op.add_argument("--order", type=int, required=True)
    op.add_argument("--identities", nargs="+", default=[], help=f"comma or space separated; from {', '.join(SEARCHABLE)}")
    op.add_argument("--relation")
    op.add_argument("--jobs", type=int, default=1)
    op.set_defaults(fn=cmd_oracle_search)
    op = osub.add_parser("affine")
    op.add_argument("--json", action="store_true")
    op.add_argument("--mod", type=int, required=True)
    op.add_argument("--phi", help="residue, or matrix rows as 'a,b;c,d'; omit to scan residues")
    op.add_argument("--out")
    op.set_defaults(fn=cmd_oracle_affine)

    sp = add("sample-rm", cmd_sample_rm, help="random spot checks of right modularity")
    sp.add_argument("source")
    sp.add_argument("--samples", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--swaps", type=int, default=0)
    sp.add_argument("--trials", type=int, default=0)
    sp.add_argument("--ks", type=int, nargs="+", default=[1, 10, 100])
    sp.add_argument("--csv")

    sp = add("fixtures", cmd_fixtures, help="list or export the embedded tables")
    sp.add_argument("action", choices=("list", "dump"))
    sp.add_argument("id", nargs="?")
    sp.add_argument("--out")
    return p


def run(argv: Sequence[str]) -> CommandResult:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
        if args.command in ("census",) and args.n < 2:
            raise UsageError("census: --n must be at least 2")
        return args.fn(args)
    except UsageError as exc:
        return CommandResult(USAGE, f"error: {exc}")
    except (TableFileError, TableError, WordSyntaxError, KeyError, SearchCapError, NotTwoGeneratedError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        return CommandResult(USAGE, f"error: {msg}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    res = run(sys.argv[1:] if argv is None else argv)
    stream = sys.stderr if res.code == USAGE else sys.stdout
    print(res.report, file=stream)
    return res.code


if __name__ == "__main__":
    sys.exit(main())
