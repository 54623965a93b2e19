import io
import json
import subprocess
import sys

import pytest

from lagjet.cli import run


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def test_verify_exit_zero_and_json(tmp_path):
    path = tmp_path / "r.json"
    code, text = call("verify", "phi-theorem1", "--n", "6", "--trials", "100", "--seed", "42", "--json", str(path))
    assert code == 0
    assert "200/200 passed" in text
    raw = path.read_bytes()
    data = json.loads(raw.decode("utf-8"))
    assert data["passed"] and data["seed"] == 42 and len(data["instances"]) == 200
    call("verify", "phi-theorem1", "--n", "6", "--trials", "100", "--seed", "42", "--json", str(tmp_path / "s.json"))
    assert (tmp_path / "s.json").read_bytes() == raw


def test_verify_float_and_quiet():
    code, text = call("verify", "lagrange-product", "--backend", "float", "--trials", "10", "--quiet")
    assert code == 0 and text.count("\n") == 1


@pytest.mark.parametrize("argv", [
    ("verify", "no-such-id"),
    ("verify", "abel", "--backend", "float"),
    ("verify", "fs-eq4", "--lambda", "0"),
    ("tree", "--order", "-1"),
    ("invert", "--u", "t^(1/2)", "--z", "1/10"),
    ("invert", "--u", "sin(t)", "--z", "0.1", "--backend", "exact"),
    ("invert", "--u", "sin(t)", "--z", "1/10", "--t", "5", "--certified", "--interval", "0", "1"),
    ("radius", "--u", "log(t)", "--interval", "1", "2", "--R", "1"),
    (),
])
def test_usage_errors_exit_2(argv):
    assert call(*argv)[0] == 2


def test_tree():
    code, text = call("tree", "--order", "5")
    assert code == 0 and text.strip() == "1, 1, 3/2, 8/3, 125/24"
    assert call("tree", "--order", "4", "--lambert")[1].strip() == "1, -1, 3/2, -8/3"


def test_invert_sin(tmp_path):
    path = tmp_path / "inv.json"
    code, text = call("invert", "--u", "sin(t)", "--t", "1", "--z", "0.1", "--order", "25", "--json", str(path))
    assert code == 0 and "residual" in text
    data = json.loads(path.read_text())
    assert data["residual"] <= 1e-10 and data["error"] <= 1e-10


def test_invert_certified_and_composition():
    code, text = call("invert", "--u", "sin(t)", "--g", "expc(1)", "--z", "1/40", "--order", "20", "--certified")
    assert code == 0 and "certified radius" in text and "L_u(g,z)" in text


def test_invert_failures_exit_1():
    # beyond the certified radius
    assert call("invert", "--u", "sin(t)", "--z", "1", "--certified")[0] == 1
    # divergent partial sums
    assert call("invert", "--u", "expc(1)", "--z", "2", "--order", "30")[0] == 1
    # too few terms for the tolerance
    assert call("invert", "--u", "sin(t)", "--t", "1", "--z", "1/2", "--order", "2")[0] == 1


def test_radius():
    code, text = call("radius", "--u", "expc(1)", "--interval", "0", "1", "--R", "1", "--rho", "1")
    assert code == 0 and "r_product" in text


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lagjet.cli", "tree", "--order", "3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "1, 1, 3/2"
