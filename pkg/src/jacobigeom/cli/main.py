"""``jacobigeom``: check structure documents and emit reports.

Exit status is 0 when every command passes, 1 when some command fails and 2
on an internal error (unparseable document, unknown name, bad arguments).
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from importlib import resources
from pathlib import Path

from ..errors import DSLSyntaxError, GeometryError
from . import commands as CMD
from . import evaluate as EV
from .syntax import Document, parse, show_document

SUITE_PACKAGE = "jacobigeom.cli.suite"


def parse_document(text: str) -> Document:
    return parse(text, CMD.verbs())


def _env(opts) -> EV.Env:
    return EV.Env(extra_samples=opts.samples, seed=opts.seed, max_degree=opts.max_degree)


def run_text(text: str, opts, name: str = "<document>") -> dict:
    """Parse, load and run one document; returns its report object."""
    t0 = time.perf_counter()
    try:
        doc = parse_document(text)
    except DSLSyntaxError as exc:
        return _broken(name, f"DSLSyntaxError: {exc}")
    env = _env(opts)
    try:
        EV.load(doc, env)
    except Exception as exc:  # any failure while binding is a document error
        where = f"line {exc.line}: " if getattr(exc, "line", None) else ""
        return _broken(name, f"{where}{type(exc).__name__}: {exc}")
    cmds = doc.commands
    if opts.parallel and len(cmds) > 1:
        with ProcessPoolExecutor(initializer=_worker_init, initargs=(text, opts)) as pool:
            results = list(pool.map(_worker_run, range(len(cmds))))
    else:
        results = [CMD.run_command(c, env, timings=not opts.no_timings) for c in cmds]
    verdict = _overall(r.verdict for r in results)
    ms = 0 if opts.no_timings else int(round((time.perf_counter() - t0) * 1000))
    return {"document": name, "verdict": verdict, "elapsed_ms": ms,
            "results": [r.as_json() | {"line": r.line} for r in results]}


def _broken(name: str, message: str) -> dict:
    return {"document": name, "verdict": CMD.ERROR, "elapsed_ms": 0, "error": message, "results": []}


def _overall(verdicts) -> str:
    vs = list(verdicts)
    if CMD.ERROR in vs:
        return CMD.ERROR
    if CMD.FAIL in vs:
        return CMD.FAIL
    return CMD.PASS


_WORKER: dict = {}


def _worker_init(text: str, opts) -> None:
    doc = parse_document(text)
    env = EV.load(doc, _env(opts))
    _WORKER.update(doc=doc, env=env, timings=not opts.no_timings)


def _worker_run(k: int):
    return CMD.run_command(_WORKER["doc"].commands[k], _WORKER["env"], _WORKER["timings"])


# ---- shipped suite ---------------------------------------------------------------------------

def suite_documents() -> list[tuple[str, str]]:
    root = resources.files(SUITE_PACKAGE)
    docs = sorted((p.name, p.read_text(encoding="utf-8")) for p in root.iterdir() if p.name.endswith(".jg"))
    return docs


# ---- output --------------------------------------------------------------------------------------

def human(report: dict) -> str:
    lines = [f"== {report['document']}: {report['verdict'].upper()}"]
    if "error" in report:
        lines.append(f"   {report['error']}")
    for r in report["results"]:
        tail = f" ({r['elapsed_ms']} ms)" if r["elapsed_ms"] else ""
        lines.append(f"[{r['verdict'].upper():5}] line {r['line']}: {r['command']}{tail}")
        lines.extend(f"        {w}" for w in r["witnesses"])
    return "\n".join(lines)


def exit_code(verdict: str) -> int:
    return {CMD.PASS: 0, CMD.FAIL: 1}.get(verdict, 2)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="jacobigeom", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("--report", type=Path, help="write the structured JSON report here")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
        p.add_argument("--samples", type=int, default=0, help="extra sample points per chart")
        p.add_argument("--max-degree", type=int, default=None, help="reject bindings of higher degree")
        p.add_argument("--parallel", action="store_true", help="run commands in worker processes")
        p.add_argument("--no-timings", action="store_true", help="zero all timings for reproducible reports")
        p.add_argument("-q", "--quiet", action="store_true", help="print only the verdict lines")

    r = sub.add_parser("run", help="run one or more documents")
    r.add_argument("documents", nargs="+", type=Path)
    common(r)
    s = sub.add_parser("suite", help="run the shipped canonical suite")
    s.add_argument("--list", action="store_true", help="list the suite documents and exit")
    common(s)
    f = sub.add_parser("format", help="print a document in canonical form")
    f.add_argument("document", type=Path)
    return ap


def main(argv: list[str] | None = None) -> int:
    opts = build_parser().parse_args(argv)
    if opts.cmd == "format":
        try:
            doc = parse_document(opts.document.read_text(encoding="utf-8"))
        except DSLSyntaxError as exc:
            print(f"{opts.document}: {exc}", file=sys.stderr)
            return 2
        sys.stdout.write(show_document(doc))
        return 0
    if opts.cmd == "suite":
        docs = suite_documents()
        if opts.list:
            for name, _ in docs:
                print(name)
            return 0
    else:
        docs = []
        for p in opts.documents:
            try:
                docs.append((str(p), p.read_text(encoding="utf-8")))
            except OSError as exc:
                print(f"{p}: {exc}", file=sys.stderr)
                return 2
    t0 = time.perf_counter()
    reports = [run_text(text, opts, name) for name, text in docs]
    verdict = _overall(r["verdict"] for r in reports)
    for rep in reports:
        if opts.quiet:
            print(f"{rep['verdict'].upper():5} {rep['document']}")
        else:
            print(human(rep))
    total = 0 if opts.no_timings else int(round((time.perf_counter() - t0) * 1000))
    print(f"overall: {verdict}" + (f" ({total} ms)" if total else ""))
    if opts.report:
        payload = {"verdict": verdict, "seed": opts.seed, "elapsed_ms": total, "documents": reports}
        opts.report.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return exit_code(verdict)


if __name__ == "__main__":
    sys.exit(main())
