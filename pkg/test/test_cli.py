"""
Command-line driver: exit codes, output formats and global flags
"""
import io
import json

from src.cli import build_parser, command_name, run_command


def run(*argv):
    out = io.StringIO()
    code = run_command(list(argv), stdout=out)
    return code, out.getvalue()


def test_command_name():
    parser = build_parser()
    assert command_name(parser.parse_args(["faber", "2"])) == "faber"
    assert command_name(parser.parse_args(["hecke", "tn", "j", "2"])) == "hecke tn"
    assert command_name(parser.parse_args(["trace", "--delta", "5", "--d", "4"])) == "trace value"


def test_faber_json():
    code, out = run("faber", "2", "--order", "8")
    assert code == 0
    body = json.loads(out)
    assert body["polynomial"]["coefficients"] == ["159768", "-1488", "1"]
    assert body["series"]["lead"] == -2
    assert body["series"]["coeffs"][3] == "42987520"


def test_global_flags_anywhere():
    # --order 는 하위 명령 앞에도 올 수 있다
    _, before = run("--order", "6", "series", "E4")
    _, after = run("series", "E4", "--order", "6")
    assert before == after
    assert json.loads(after)["coeffs"][:3] == ["1", "240", "2160"]


def test_usage_errors():
    assert run("faber", "2", "--bogus")[0] == 2
    assert run("series", "E12")[0] == 2
    assert run("eval", "j", "--tau", "nonsense")[0] == 2


def test_qf_list():
    code, out = run("qf", "list", "-20")
    assert code == 0
    assert json.loads(out) == [
        {"a": 1, "b": 0, "c": 5, "omega": 1},
        {"a": 2, "b": 2, "c": 3, "omega": 1},
    ]


def test_math_error_is_json_on_stdout():
    code, out = run("qf", "list", "-5")
    assert code == 1
    body = json.loads(out)
    assert body["error"] == "bad_discriminant"
    assert body["message"]


def test_text_and_csv_formats():
    code, out = run("qf", "chi", "5", "2", "2", "3", "--format", "text")
    assert code == 0
    assert any(line.split() == ["chi", "-1"] for line in out.splitlines())

    code, out = run("qf", "chi", "5", "1", "0", "5", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "key,value"
    assert "chi,1" in out.splitlines()


def test_verify_suite_report():
    code, out = run("verify", "akn", "--format", "text")
    assert code == 0
    assert out.splitlines()[0] == "suite akn: PASS"


def test_report_is_thread_independent():
    _, one = run("verify", "akn", "--threads", "1")
    _, four = run("verify", "akn", "--threads", "4")
    assert one == four
    body = json.loads(one)
    assert body["passed"] is True
    assert len(body["digest"]) == 64
    assert "threads" not in body["provenance"]


def test_eval_j_at_i():
    code, out = run("eval", "j", "--tau", "0,1", "--digits", "30")
    assert code == 0
    body = json.loads(out)
    assert abs(float(body["re"]) - 1728) < 1e-9
    assert abs(float(body["im"])) < 1e-9
