import io
import json
import subprocess
import sys

import pytest

import rcmodel.rigged as rigged
from rcmodel.cartan import build_cartan, folding, parse_weight
from rcmodel.cli import describe, main
from rcmodel.graph import from_json, generate, same_graph, to_dot, to_json
from rcmodel.kashiwara import f_string
from rcmodel.rigged import encode, highest_weight_empty, infinity_empty
from rcmodel.virtualization import virtualize

K4_SPEC = "matrix:[[2,-1,-1,-1],[-1,2,-1,-1],[-1,-1,2,-1],[-1,-1,-1,2]]"


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def test_generate_affine_a2_dot():
    code, text = run("generate", "--type", "A2~", "--hw", "La[0]", "--depth", "4", "--format", "dot")
    assert code == 0
    g = generate(highest_weight_empty(build_cartan("A2~"), parse_weight("La[0]")), depth=4)
    assert text == to_dot(g)
    assert text.count(" -> ") == 9


def test_generate_a1_chain_json():
    code, text = run("generate", "--type", "A1", "--inf", "--depth", "3", "--format", "json")
    assert code == 0
    g = from_json(text)
    assert len(g.nodes) == 4 and g.edges == [[0, 1, 1], [1, 1, 2], [2, 1, 3]]
    assert same_graph(g, generate(infinity_empty(build_cartan("A1")), depth=3))


def test_generate_complete_graph_depth_two():
    code, text = run("generate", "--type", K4_SPEC, "--inf", "--depth", "2", "--format", "json")
    assert code == 0
    assert len(json.loads(text)["nodes"]) == 21


def test_generate_text_format():
    code, text = run("generate", "--type", "A1", "--hw", "La[1]")
    assert code == 0
    assert text.splitlines()[:3] == ["nodes: 2", "edges: 1", "exhaustive: True"]


def test_apply_transcripts():
    code, text = run("apply", "--type", "D5", "--inf", "--ops", "4,5,2,1,4,4,3,2,4,5,5,1,3")
    assert code == 0
    assert "epsilon: [1, 1, 1, 2, 1]" in text and "phi: [-1, 1, 6, -4, -3]" in text
    code, text = run("apply", "--type", "E7", "--inf", "--ops", "1,3,4,2,5,6,7,4")
    assert "epsilon: [0, 0, 0, 1, 0, 0, 1]" in text
    code, text = run("apply", "--type", "A2~", "--hw", "La[0]", "--ops", "0,1,0")
    assert code == 0 and text == "null\n"


def test_apply_is_a_thin_wrapper():
    d = build_cartan("D5")
    word = [4, 5, 2, 1, 4, 4, 3, 2, 4, 5, 5, 1, 3]
    rc = f_string(infinity_empty(d), word)
    _, text = run("apply", "--type", "D5", "--ops", ",".join(map(str, word)))
    assert text == describe(rc) + "\n"
    _, js = run("apply", "--type", "D5", "--ops", ",".join(map(str, word)), "--format", "json")
    assert json.loads(js) == encode(rc)


def test_virtualize_example():
    elem = json.dumps({"parts": {"1": [[2, 1]], "2": [[1, -1], [1, -1]]}, "L": [[1, 1, 1], [2, 1, 1]],
                       "mode": "highest_weight"})
    code, text = run("virtualize", "--folding", "C2->A3", "--element", elem)
    assert code == 0
    doc = json.loads(text)
    assert doc["parts"] == {"1": [[2, 1]], "2": [[2, -2], [2, -2]], "3": [[2, 1]]}
    fold = folding("C2->A3")
    src = rigged.decode(json.loads(elem), fold.source)
    assert doc == encode(virtualize(src, fold))


def test_virtualize_from_file(tmp_path):
    path = tmp_path / "x.json"
    path.write_text('{"parts": {"1": [[1, -1]]}}')
    code, text = run("virtualize", "--folding", "G2->D4", "--element", str(path))
    assert code == 0 and json.loads(text)["parts"]


@pytest.mark.parametrize("argv", [
    ["generate", "--type", "Q9", "--inf"],
    ["generate", "--type", "A2", "--hw", "La[7]"],
    ["apply", "--type", "A2", "--ops", "f1,x2"],
    ["apply", "--type", "A2", "--ops", "f5"],
    ["virtualize", "--folding", "Z3->A1", "--element", "{}"],
    ["virtualize", "--folding", "C2->A3", "--element", "{not json"],
])
def test_usage_errors_exit_2(argv, capsys):
    code, _ = run(*argv)
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as info:
        main(["generate"])
    assert info.value.code == 2


def test_budget_exit_3(capsys):
    code, _ = run("generate", "--type", "A3", "--inf", "--depth", "8", "--budget", "20")
    assert code == 3
    assert "budget" in capsys.readouterr().err


def test_worked_examples_command_passes():
    code, text = run("verify-paper")
    assert code == 0
    lines = text.splitlines()
    assert lines[-1] == "12/12 checks passed"
    assert all(line.startswith("PASS") for line in lines[:-1])


def test_worked_examples_command_reports_vacancy_fault_first(monkeypatch):
    original = rigged._vacancy_at
    monkeypatch.setattr(rigged, "_vacancy_at", lambda rc, k, i: -original(rc, k, i))
    code, text = run("verify-paper")
    assert code == 1
    first_fail = next(line for line in text.splitlines() if line.startswith("FAIL"))
    assert first_fail == "FAIL  D5 highest-weight element: vacancy numbers"
    assert "- expected" in text and "+ actual" in text


def test_properties_command():
    code, text = run("properties", "--type", "G2", "--samples", "30", "--seed", "3")
    assert code == 0
    assert text.startswith("checked 30 elements (seed 3): 0 violations")


def test_output_is_byte_deterministic():
    argv = ["generate", "--type", "B2", "--inf", "--depth", "4", "--format", "json"]
    a = subprocess.run([sys.executable, "-m", "rcmodel.cli", *argv], capture_output=True, check=True)
    b = subprocess.run([sys.executable, "-m", "rcmodel.cli", *argv], capture_output=True, check=True,
                       env={"PYTHONHASHSEED": "123"})
    assert a.stdout == b.stdout
    assert a.stdout.decode() == to_json(generate(infinity_empty(build_cartan("B2")), depth=4)) + "\n"
