import io
import json

import pytest

from minpos import cli
from minpos import threshold as th
from minpos.closedform import threshold_series


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_roots_default():
    code, out, _ = invoke("roots", "--digits", "10")
    assert code == 0
    assert out.splitlines()[1] == "a_low,0.2239320287,0.2239320287"


def test_global_options_before_or_after_command():
    assert invoke("--digits", "8", "roots")[1] == invoke("roots", "--digits", "8")[1]


def test_trace_unit_goes_negative():
    code, out, _ = invoke("trace", "--lambda", "1", "--mu", "1", "--gamma", "1", "--xi", "1",
                          "--offset", "1", "--a", "0.1", "--steps", "2", "--digits", "3")
    assert code == 0
    assert out.splitlines()[-1] == "2,-0.200"


def test_figure1_shape():
    code, out, _ = invoke("figure1")
    lines = out.splitlines()
    assert code == 0
    assert len(lines) == 11
    assert all(len(line.split(",")) == 11 for line in lines)
    assert lines[-1].split(",")[1].startswith("-1630.09028811")


def test_threshold_both_json():
    code, out, _ = invoke("threshold", "--width", "1e-20", "--format", "json", "--digits", "20")
    assert code == 0
    doc = json.loads(out)
    row = dict(zip(doc["columns"], doc["rows"][0]))
    assert row["method"] == "Both"
    assert row["lo"].startswith("0.92478884109887440")


def test_precision_sweep_warns():
    code, out, err = invoke("precision-sweep", "--digits", "5..30")
    assert code == 0
    assert len(out.splitlines()) == 27
    assert "decreases" in err


def test_usage_errors():
    assert invoke()[0] == 1
    assert invoke("bogus")[0] == 1
    assert invoke("classify")[0] == 1
    assert invoke("classify", "--a", "abc")[0] == 1
    assert invoke("roots", "--digits", "0")[0] == 1
    assert invoke("roots", "--lambda", "x")[0] == 1


def test_domain_errors():
    assert invoke("roots", "--mu", "0")[0] == 2
    assert invoke("classify", "--a", "1", "--xi", "0")[0] == 2
    assert invoke("phi", "--n", "1", "--z", "1")[0] == 2


def test_inconsistency_exit(monkeypatch):
    monkeypatch.setattr(th, "threshold_series", lambda p, w: threshold_series(p, w) + 1)
    code, _, err = invoke("threshold", "--width", "1e-10")
    assert code == 3
    assert "inconsistency" in err


def test_help_exits_zero():
    assert invoke("--help")[0] == 0


def test_config_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# unit model\nlambda = 1\nmu = 1\ngamma = 1\nxi = 1\noffset = 1\ndigits = 6\n")
    _, from_cfg, _ = invoke("roots", "--config", str(cfg))
    assert from_cfg.splitlines()[1] == "a_low,0.381966,0.381966"
    _, flagged, _ = invoke("roots", "--config", str(cfg), "--digits", "4")
    assert flagged.splitlines()[1] == "a_low,0.3820,0.3820"
    _, builtin, _ = invoke("roots", "--digits", "4")
    assert builtin.splitlines()[1] == "a_low,0.2239,0.2239"


@pytest.mark.parametrize("text", ["nonsense\n", "colour = red\n", "digits = two\n"])
def test_bad_config(tmp_path, text):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(text)
    assert invoke("roots", "--config", str(cfg))[0] == 1


def test_missing_config(tmp_path):
    assert invoke("roots", "--config", str(tmp_path / "absent.cfg"))[0] == 1


@pytest.mark.parametrize("argv", [
    ("figure1",),
    ("threshold", "--width", "1e-15", "--format", "json"),
    ("decay", "--indices", "10,100"),
    ("ratio", "--steps", "12"),
])
def test_deterministic(argv):
    first = invoke(*argv)
    assert first[0] == 0
    assert invoke(*argv) == first
