import json
import math

import pytest

import zerolab


def test_builtins_listed():
    names = zerolab.builtin_names()
    assert "two-mode-heat" in names
    assert zerolab.builtin("robin-basic")["id"] == "robin-basic"


def test_solve_heat_decay():
    cfg = {
        "initial": "sin(pi*x)",
        "time": {"horizon": 0.1, "dt": 1e-4, "output_every": 100},
        "grid": {"nodes": 401},
    }
    out = zerolab.solve(json.dumps(cfg))
    assert out["t"][-1] == pytest.approx(0.1)
    assert max(out["u"][-1]) == pytest.approx(math.exp(-math.pi**2 * 0.1), rel=1e-4)


def test_count_zeros():
    x = [i / 400 for i in range(401)]
    u = [math.sin(3 * math.pi * v) for v in x]
    zeros = zerolab.count_zeros(x, u)
    assert len(zeros) == 4
    assert zeros[1][0] == pytest.approx(1 / 3, abs=1e-6)
    assert zeros[0][2] and zeros[-1][2]


def test_two_mode_drop():
    a = zerolab.analyze("two-mode-heat")
    assert a["Z"][0] == 3 and a["Z"][-1] == 2
    assert len(a["drops"]) == 1
    assert a["drops"][0]["t_before"] == pytest.approx(math.log(2) / (3 * math.pi**2), abs=2e-3)
    assert a["passed"]


def test_synthetic_x_label():
    t = [i * 5e-5 for i in range(-2000, 2001)]
    w = [0.0 if s == 0 else s * s * math.sin(1 / s) for s in t]
    assert any("X" in label for label in zerolab.classify_moments(t, w))


def test_run_writes_outputs(tmp_path):
    m = zerolab.run("robin-basic", tmp_path, checks=True)
    assert m["passed"]
    assert (tmp_path / "trace.csv").read_text().startswith("t,Z,w1,w2")


def test_errors_surface():
    with pytest.raises(zerolab.ZeroLabError, match="parse error"):
        zerolab.solve("{\"grid\": ")


def test_suite_filter():
    results = zerolab.suite("A9")
    assert [r["id"] for r in results] == ["A9"]
    assert results[0]["passed"]
