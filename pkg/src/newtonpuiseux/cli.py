"""Command line front end: JSON on stdout, logs on stderr.

Exit codes: 0 on success (for ``verify``: every inequality holds), 1 for
computation errors or failed checks, 2 for usage errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from . import bounds, corpus, polygon, solver
from .analysis import NotASolution, audit, trace
from .equation import nu0, parse_equation, validate_covered
from .operators import OperatorSpec
from .parser import ParseError, parse_scalar, parse_series
from .scalars import DEFAULT_PRECISION, field_from_name

log = logging.getLogger("newtonpuiseux")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    """Everything a run depends on; a run is reproducible from this."""

    command: str
    inputs: dict = field(default_factory=dict)
    op: str = "diff"
    q: str | None = None
    q_root: str | None = None
    root_index: int = 1
    backend: str | None = None
    precision: int = DEFAULT_PRECISION
    options: dict = field(default_factory=dict)
    seed: int = 0

    def to_json(self) -> dict:
        return asdict(self)


def _text(value: str) -> str:
    """Inline text, or the contents of a file when ``value`` names one."""
    p = Path(value)
    if p.is_file():
        return p.read_text().strip()
    return value


def _field(cfg: RunConfig):
    if cfg.backend is None:
        return None
    try:
        return field_from_name(cfg.backend, cfg.precision)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _operator(cfg: RunConfig) -> OperatorSpec:
    if cfg.op == "diff":
        return OperatorSpec.differential()
    if cfg.q is None:
        raise UsageError("--op q needs --q")
    q = parse_scalar(cfg.q)
    root = parse_scalar(cfg.q_root) if cfg.q_root is not None else None
    try:
        return OperatorSpec.q_difference(q, root, cfg.root_index)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _equation(cfg: RunConfig):
    if "eq" not in cfg.inputs:
        raise UsageError("--eq is required")
    return parse_equation(_text(cfg.inputs["eq"]), _operator(cfg), _field(cfg))


def _solution(cfg: RunConfig, fld=None):
    if "solution" not in cfg.inputs:
        raise UsageError("--solution is required")
    return parse_series(_text(cfg.inputs["solution"]), fld)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _lines(text: str | None):
    if not text:
        return []
    try:
        return [Fraction(t.strip()) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --lines value {text!r}") from exc


# subcommands

def cmd_parse(cfg, out):
    P = _equation(cfg)
    doc = P.to_json()
    doc["covered"] = validate_covered(P).to_json(P.field)
    out.write(_dump(doc) + "\n")
    return 0


def cmd_polygon(cfg, out):
    P = _equation(cfg)
    cloud = P.cloud_keys()
    poly = polygon.build_polygon(cloud)
    doc = {
        "vertices": poly.to_json(),
        "sides": [{"co_slope": str(mu), "left": [str(a[0]), a[1]], "right": [str(b[0]), b[1]]}
                  for mu, a, b in poly.sides],
        "height": polygon.height(cloud),
        "nu0": str(nu0(P)),
        "grid": polygon.grid_denominator(cloud),
        "candidate_exponents": [str(mu) for mu in solver.candidate_exponents(P, cfg.options["max_ram"])],
        "elements": [polygon.element(cloud, mu).to_json() for mu in _lines(cfg.options.get("lines"))],
    }
    out.write(_dump(doc) + "\n")
    return 0


def _values(items):
    vals = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--value expects MU=C, got {item!r}")
        mu, c = item.split("=", 1)
        vals.setdefault(Fraction(mu), []).append(parse_scalar(c))
    return vals


def cmd_expand(cfg, out):
    P = _equation(cfg)
    o = cfg.options
    jets = solver.expand(P, Fraction(o["order"]), o["max_ram"], o["dicritical"],
                         _values(o.get("values")))
    log.info("%d jets", len(jets))
    out.write(_dump([j.to_json() for j in jets]) + "\n")
    return 0


def cmd_trace(cfg, out):
    P = _equation(cfg)
    s = _solution(cfg, _field(cfg))
    K = cfg.options.get("order")
    tr = trace(P, s, int(K) if K is not None else None)
    for line in tr.to_json_lines():
        out.write(line + "\n")
    bad = audit(tr)
    for v in bad:
        log.warning("invariant violated at k=%d: %s %s", v.k, v.name, v.detail)
    return 1 if bad else 0


def _check_pair(P, s, strictness):
    ver = solver.verify_solution(P, s)
    doc = {"verification": ver.to_json()}
    if not ver.passed:
        doc["passed"] = False
        return doc
    tr = trace(P, s)
    rep = bounds.bound_report(P, s, tr, strictness=strictness)
    doc["bounds"] = rep.to_json()
    doc["violations"] = [v.to_json() for v in audit(tr)]
    doc["passed"] = rep.passed and not doc["violations"]
    return doc


def _check_fixture(args):
    path, strictness, precision = args
    doc = json.loads(Path(path).read_text())
    P, s = corpus.load_fixture(doc, precision)
    out = _check_pair(P, s, strictness)
    out["fixture"] = str(path)
    return out


def cmd_verify(cfg, out):
    o = cfg.options
    strict = o.get("strictness", False)
    if "eq" in cfg.inputs:
        P = _equation(cfg)
        s = _solution(cfg, _field(cfg))
        results = [_check_pair(P, s, strict)]
    else:
        paths = [Path(p) for p in o.get("fixtures") or []]
        if o.get("dir"):
            d = Path(o["dir"])
            if not d.is_dir():
                raise UsageError(f"{d} is not a directory")
            paths += sorted(d.glob("*.json"))
        jobs = [(str(p), strict, cfg.precision) for p in paths]
        if o.get("jobs", 1) > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(o["jobs"]) as pool:
                results = list(pool.map(_check_fixture, jobs))
        else:
            results = [_check_fixture(j) for j in jobs]
    passed = all(r["passed"] for r in results)
    doc = {"checked": len(results), "passed": passed, "results": results}
    out.write(_dump(doc) + "\n")
    log.info("%d checked, %s", len(results), "all passed" if passed else "failures")
    return 0 if passed else 1


def cmd_corpus_gen(cfg, out):
    o = cfg.options
    spec = corpus.CorpusSpec(seed=cfg.seed, genus=o["genus"], max_ramification=o["max_ram"],
                             operator=cfg.op, q=cfg.q)
    fixtures = corpus.generate(spec, o["count"])
    written = corpus.write_fixtures(fixtures, o["out"])
    out.write(_dump({"spec": corpus.spec_to_json(spec), "written": written}) + "\n")
    return 0


def cmd_render(cfg, out):
    P = _equation(cfg)
    o = cfg.options
    text = polygon.render(P.cloud(), o["format"], _lines(o.get("lines")), o.get("title"))
    if o.get("out"):
        Path(o["out"]).write_text(text)
        out.write(_dump({"written": o["out"]}) + "\n")
    else:
        out.write(text)
    return 0


COMMANDS = {
    "parse": cmd_parse,
    "polygon": cmd_polygon,
    "expand": cmd_expand,
    "trace": cmd_trace,
    "verify": cmd_verify,
    "corpus-gen": cmd_corpus_gen,
    "render": cmd_render,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--op", choices=["diff", "q"], default="diff")
    common.add_argument("--q", help="q for the q-difference operator, e.g. 2, 1/2, 3+i/4")
    common.add_argument("--q-root", help="chosen root q^(1/N); N is --root-index")
    common.add_argument("--root-index", type=int, default=1)
    common.add_argument("--backend", help="rational, quadratic:d or numeric")
    common.add_argument("--precision", type=int, default=DEFAULT_PRECISION)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="newtonpuiseux", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=[common], help="parse an equation")
    p.add_argument("--eq", required=True)

    p = sub.add_parser("polygon", parents=[common], help="Newton polygon and elements")
    p.add_argument("--eq", required=True)
    p.add_argument("--lines")
    p.add_argument("--max-ram", type=int, default=24)

    p = sub.add_parser("expand", parents=[common], help="solution jets")
    p.add_argument("--eq", required=True)
    p.add_argument("--order", required=True)
    p.add_argument("--max-ram", type=int, default=24)
    p.add_argument("--dicritical", default="param")
    p.add_argument("--value", action="append", dest="values", help="MU=C continuation value")

    p = sub.add_parser("trace", parents=[common], help="step records along a solution")
    p.add_argument("--eq", required=True)
    p.add_argument("--solution", required=True)
    p.add_argument("--order", help="last index K (units of 1/n)")

    p = sub.add_parser("verify", parents=[common], help="check bounds on fixtures")
    p.add_argument("--eq")
    p.add_argument("--solution")
    p.add_argument("--fixture", action="append", dest="fixtures")
    p.add_argument("--dir")
    p.add_argument("--strictness", action="store_true")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("corpus-gen", parents=[common], help="write corpus fixtures")
    p.add_argument("--genus", type=int, default=1)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--max-ram", type=int, default=12)
    p.add_argument("--out", required=True)

    p = sub.add_parser("render", parents=[common], help="draw cloud and polygon")
    p.add_argument("--eq", required=True)
    p.add_argument("--lines")
    p.add_argument("--format", choices=["svg", "ascii", "json"], default="svg")
    p.add_argument("--title")
    p.add_argument("--out")
    return ap


def config_from_args(ns) -> RunConfig:
    d = vars(ns).copy()
    inputs = {k: d.pop(k) for k in ("eq", "solution") if d.get(k) is not None}
    d.pop("eq", None)
    d.pop("solution", None)
    base = {k: d.pop(k) for k in ("command", "op", "q", "q_root", "root_index", "backend",
                                  "precision", "seed")}
    d.pop("verbose", None)
    return RunConfig(inputs=inputs, options=d, **base)


def run(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    try:
        return COMMANDS[cfg.command](cfg, out)
    except (UsageError, ParseError) as exc:
        log.error("%s", exc)
        return 2
    except (NotASolution, ValueError, ArithmeticError, RuntimeError) as exc:
        log.error("%s", exc)
        return 1


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
