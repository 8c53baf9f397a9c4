"""Command-line front end: analyse one program or a directory of programs."""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

from .formulas import parse_evaluation, render
from .grounding import DEFAULT_MAX_SPACE, AnalysisContext, ResourceLimit, ground_space
from .models import COHERENT, NON_DETERMINISTIC, NON_REACTIVE, classify_logical, residual_facts
from .proofs import (
    PropertyViolation,
    Prover,
    check_theorems,
    classify_constructive,
    proof_to_dict,
    render_proof,
)
from .syntax import ParseError, SemErr, parse, pretty

SCHEMA = 1

EXIT_CONSTRUCTIVE = 0
EXIT_NOT_CONSTRUCTIVE = 10
EXIT_NON_REACTIVE = 20
EXIT_NON_DETERMINISTIC = 21
EXIT_INPUT_ERROR = 2
EXIT_RESOURCE = 3
EXIT_VIOLATION = 4

CORPUS_DIR = Path(__file__).parent / "corpus"


@dataclass
class AnalysisReport:
    source: str
    ast: str
    mode: str
    logical: dict
    constructive: dict
    theorems: list
    timing: dict = field(default_factory=dict)
    schema: int = SCHEMA

    @property
    def exit_code(self) -> int:
        return exit_code_for(self.logical["status"], self.constructive["constructive"])

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "AnalysisReport":
        return cls(**data)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    @classmethod
    def from_json(cls, text: str) -> "AnalysisReport":
        return cls.from_dict(json.loads(text))


def exit_code_for(status: str, constructive: bool) -> int:
    if status == NON_REACTIVE:
        return EXIT_NON_REACTIVE
    if status == NON_DETERMINISTIC:
        return EXIT_NON_DETERMINISTIC
    return EXIT_CONSTRUCTIVE if constructive else EXIT_NOT_CONSTRUCTIVE


def analyze(source: str, *, collapsed: bool = False, proofs: bool = False,
            evaluation: Optional[str] = None, max_space: int = DEFAULT_MAX_SPACE) -> AnalysisReport:
    """Run both semantics on ``source``.

    Raises ParseError/SemErr, ResourceLimit, and PropertyViolation when the
    theorem checks fail.
    """
    timing = {}
    t0 = time.perf_counter()
    prog, env = parse(source)
    ctx = AnalysisContext(prog, env)
    try:
        evals = [parse_evaluation(evaluation, env)] if evaluation is not None else None
    except ValueError as e:
        raise SemErr(str(e)) from None
    t1 = time.perf_counter()
    u = ground_space(ctx, collapsed=collapsed, max_space=max_space)
    t2 = time.perf_counter()
    lv = classify_logical(u, ctx, evaluations=evals)
    t3 = time.perf_counter()
    prover = Prover(u)
    cv = classify_constructive(u, ctx, evaluations=evals, prover=prover)
    t4 = time.perf_counter()
    th = check_theorems(u, ctx, lv, cv, prover=prover, evaluations=evals)
    t5 = time.perf_counter()
    timing = {"parse": t1 - t0, "ground": t2 - t1, "models": t3 - t2,
              "proofs": t4 - t3, "theorems": t5 - t4}

    logical = {
        "status": lv.status,
        "count": lv.count,
        "per_evaluation": [
            {"evaluation": str(I), "status": st, "count": n}
            for I, (st, n) in lv.per_evaluation.items()
        ],
        "models": [m.render() for m in lv.models],
        "residual": [[render(f) for f in residual_facts(u, m)] for m in lv.models],
    }
    obligations = []
    for (I, ob), res in cv.per_obligation.items():
        entry = {"evaluation": str(I), "obligation": ob, "status": res.status,
                 "target": None if res.target is None else pretty(res.target), "note": res.note}
        if proofs:
            entry["proofs"] = [proof_to_dict(t) for t in res.trees]
            entry["proof_text"] = [render_proof(t) for t in res.trees]
        obligations.append(entry)
    report = AnalysisReport(
        source=source,
        ast=pretty(prog),
        mode="collapsed-emission" if collapsed else "standard",
        logical=logical,
        constructive={"constructive": cv.constructive, "obligations": obligations},
        theorems=[asdict(r) for r in th],
        timing=timing,
    )
    bad = [r for r in th if not r.holds]
    if bad:
        raise PropertyViolation("; ".join(f"{r.name}: {r.detail}" for r in bad))
    if cv.constructive and lv.status != COHERENT:
        raise PropertyViolation("constructive program without a unique supported model")
    return report


def format_text(report: AnalysisReport, *, models: bool = False, proofs: bool = False) -> str:
    out = ["HEADER", f"  program: {report.ast}", f"  mode: {report.mode}"]
    lg = report.logical
    out += ["", "LOGICAL", f"  status: {lg['status']}", f"  supported models: {lg['count']}"]
    for pe in lg["per_evaluation"]:
        out.append(f"  {pe['evaluation']}: {pe['status']} ({pe['count']} model{'' if pe['count'] == 1 else 's'})")
    if models:
        out += ["", "MODELS"]
        for k, facts in enumerate(lg["models"]):
            out.append(f"  model {k + 1}:")
            residual = set(lg["residual"][k])
            for f in facts:
                out.append(f"    {f}" + ("   [residual]" if f in residual else ""))
    cs = report.constructive
    out += ["", "CONSTRUCTIVE", f"  constructive: {'yes' if cs['constructive'] else 'no'}"]
    for ob in cs["obligations"]:
        extra = f" -> {ob['target']}" if ob["target"] and ob["status"] == "ProvedPositive" else ""
        note = f" ({ob['note']})" if ob["note"] else ""
        out.append(f"  {ob['evaluation']} {ob['obligation']}: {ob['status']}{extra}{note}")
    if proofs:
        out += ["", "PROOFS"]
        for ob in cs["obligations"]:
            for text in ob.get("proof_text", []):
                out.append(f"  [{ob['evaluation']} {ob['obligation']}]")
                out.extend("    " + line for line in text.splitlines())
                out.append("")
    out += ["", "THEOREMS"]
    for th in report.theorems:
        out.append(f"  {th['name']}: {'holds' if th['holds'] else 'VIOLATED'} - {th['detail']}")
    return "\n".join(out)


def cmd_analyze(args) -> int:
    try:
        source = Path(args.file).read_text(encoding="utf-8")
        report = analyze(source, collapsed=args.collapsed_emission, proofs=args.proofs,
                         evaluation=args.eval, max_space=args.max_space)
    except (ParseError, SemErr, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except ResourceLimit as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except PropertyViolation as e:
        print(f"property violation: {e}", file=sys.stderr)
        return EXIT_VIOLATION
    if args.format == "json":
        print(report.to_json())
    else:
        print(format_text(report, models=args.models, proofs=args.proofs))
    return report.exit_code


def _corpus_row(path: Path, collapsed: bool, max_space: int) -> dict:
    row = {"name": path.stem}
    t0 = time.perf_counter()
    try:
        rep = analyze(path.read_text(encoding="utf-8"), collapsed=collapsed, max_space=max_space)
        row.update(status=rep.logical["status"], models=rep.logical["count"],
                   constructive=rep.constructive["constructive"], theorems="ok",
                   exit=rep.exit_code)
    except PropertyViolation as e:
        row.update(status="-", models=None, constructive=None, theorems="VIOLATED",
                   error=str(e), exit=EXIT_VIOLATION)
    except ResourceLimit as e:
        row.update(status="-", models=None, constructive=None, theorems="-",
                   error=str(e), exit=EXIT_RESOURCE)
    except (ParseError, SemErr) as e:
        row.update(status="-", models=None, constructive=None, theorems="-",
                   error=str(e), exit=EXIT_INPUT_ERROR)
    row["time"] = round(time.perf_counter() - t0, 4)
    sidecar = path.with_suffix(".expected.json")
    if sidecar.exists():
        exp = json.loads(sidecar.read_text())
        key = "collapsed" if collapsed else "standard"
        exp = exp.get(key, exp)
        row["expected"] = all(row.get(k) == v for k, v in exp.items())
    return row


def run_corpus(directory, *, collapsed: bool = False,
               max_space: int = DEFAULT_MAX_SPACE) -> list:
    paths = sorted(Path(directory).glob("*.est"))
    with ThreadPoolExecutor() as pool:
        return list(pool.map(lambda p: _corpus_row(p, collapsed, max_space), paths))


def format_table(rows: list) -> str:
    head = ["name", "status", "models", "constructive", "theorems", "expected", "time"]
    lines = ["\t".join(head)]
    for r in rows:
        lines.append("\t".join(str(r.get(k, "")) for k in head))
    return "\n".join(lines)


def cmd_corpus(args) -> int:
    rows = run_corpus(args.dir or CORPUS_DIR, collapsed=args.collapsed_emission,
                      max_space=args.max_space)
    if args.format == "json":
        print(json.dumps({"schema": SCHEMA, "rows": rows}, indent=2))
    else:
        print(format_table(rows))
    for r in rows:
        if "error" in r:
            print(f"{r['name']}: {r['error']}", file=sys.stderr)
    return 1 if any(r["theorems"] == "VIOLATED" for r in rows) else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="esterel-causality",
                                 description="Logical and constructive analysis of Esterel programs.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--collapsed-emission", action="store_true",
                       help="derive emission from transitions instead of the emission rules")
        p.add_argument("--max-space", type=int, default=DEFAULT_MAX_SPACE)

    a = sub.add_parser("analyze", help="analyse one .est file")
    a.add_argument("file")
    a.add_argument("--proofs", action="store_true")
    a.add_argument("--models", action="store_true")
    a.add_argument("--eval", help="restrict to one input evaluation, e.g. i=+,j=-")
    common(a)
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("corpus", help="analyse every .est file in a directory")
    c.add_argument("dir", nargs="?", help="defaults to the bundled corpus")
    common(c)
    c.set_defaults(func=cmd_corpus)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
