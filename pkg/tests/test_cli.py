from __future__ import annotations

import io
import json

import pytest

from newtonpuiseux.cli import RunConfig, build_parser, config_from_args, main, run

from conftest import FIXTURES


def _run(argv):
    cfg = config_from_args(build_parser().parse_args(argv))
    out = io.StringIO()
    code = run(cfg, out)
    return code, out.getvalue()


def test_parse():
    code, out = _run(["parse", "--eq", str(FIXTURES / "fig1.eq"), "--op", "q", "--q", "2"])
    doc = json.loads(out)
    assert code == 0 and doc["covered"]["valid"]


def test_polygon():
    code, out = _run(["polygon", "--eq", str(FIXTURES / "fig1.eq"), "--lines", "1/2,1,2"])
    doc = json.loads(out)
    assert code == 0
    assert doc["candidate_exponents"] == ["1/2", "1", "2"]
    assert [e["top"] for e in doc["elements"]] == [4, 2, 2]
    assert doc["nu0"] == "3"


def test_trace_worked_example():
    code, out = _run(["trace", "--eq", str(FIXTURES / "sec23.eq"),
                      "--solution", str(FIXTURES / "sec23.sol"), "--op", "diff"])
    recs = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and len(recs) == 4
    assert [r["dicritical"] for r in recs] == [False, True, False, False]
    assert recs[3]["a_k"] == "-121/30"


def test_trace_not_a_solution_exits_one():
    code, _ = _run(["trace", "--eq", str(FIXTURES / "sec23.eq"), "--solution", "-x + 7*x^(3/2)"])
    assert code == 1


def test_expand():
    code, out = _run(["expand", "--eq", "-3*x^2 + 2*y*y1", "--order", "3/2"])
    jets = json.loads(out)
    assert code == 0 and len(jets) == 2


def test_render_svg(tmp_path):
    target = tmp_path / "fig.svg"
    code, _ = _run(["render", "--eq", str(FIXTURES / "fig1.eq"), "--op", "q", "--q", "2",
                    "--lines", "1/2,2", "--out", str(target)])
    svg = target.read_text()
    assert code == 0 and svg.startswith("<svg") and svg.count('fill="white"') == 2


def test_verify_inline():
    code, out = _run(["verify", "--eq", str(FIXTURES / "sec23.eq"),
                      "--solution", str(FIXTURES / "sec23.sol"), "--strictness"])
    doc = json.loads(out)
    assert code == 0 and doc["passed"] and doc["checked"] == 1


def test_verify_empty_dir(tmp_path):
    code, out = _run(["verify", "--dir", str(tmp_path)])
    assert code == 0 and json.loads(out) == {"checked": 0, "passed": True, "results": []}


def test_corpus_gen_then_verify(tmp_path):
    code, out = _run(["corpus-gen", "--seed", "3", "--genus", "2", "--count", "4", "--out", str(tmp_path)])
    assert code == 0 and len(json.loads(out)["written"]) == 4
    code, out = _run(["verify", "--dir", str(tmp_path), "--jobs", "2"])
    doc = json.loads(out)
    assert code == 0 and doc["checked"] == 4 and doc["passed"]


def test_q_corpus_gen_then_verify(tmp_path):
    code, _ = _run(["corpus-gen", "--op", "q", "--q", "1/2", "--count", "3", "--max-ram", "6",
                    "--out", str(tmp_path)])
    assert code == 0
    code, out = _run(["verify", "--dir", str(tmp_path)])
    assert code == 0 and json.loads(out)["checked"] == 3


def test_usage_errors_exit_two(tmp_path):
    assert _run(["parse", "--eq", "x + * y"])[0] == 2
    assert _run(["parse", "--eq", "y - x", "--op", "q"])[0] == 2
    assert _run(["parse", "--eq", "y - x", "--backend", "octonion"])[0] == 2
    assert _run(["verify", "--dir", str(tmp_path / "missing")])[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_output_is_byte_stable():
    argv = ["trace", "--eq", str(FIXTURES / "sec23.eq"), "--solution", str(FIXTURES / "sec23.sol")]
    assert _run(argv) == _run(argv)


def test_run_config_serialises():
    cfg = config_from_args(build_parser().parse_args(["expand", "--eq", "y - x", "--order", "2"]))
    doc = cfg.to_json()
    assert json.loads(json.dumps(doc)) == doc
    assert RunConfig(**doc) == cfg
