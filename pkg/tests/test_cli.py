import json
from fractions import Fraction

import pytest

from shiftshadow.cli import main
from shiftshadow.hyperspace import FiniteCompact
from shiftshadow.seqspace import UNIT, constant_seq, periodic_seq, with_values
from shiftshadow.spaces import ShiftSpace, point_to_json

CUBE = ShiftSpace("cube")
HALF = Fraction(1, 2)


def write_json(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def run(args):
    return main([str(a) for a in args])


@pytest.fixture
def cube_pair(tmp_path):
    x = constant_seq(UNIT, HALF)
    y = with_values(x, {-1: HALF + Fraction(1, 40)})
    fx = write_json(tmp_path / "x.json", point_to_json(x))
    fy = write_json(tmp_path / "y.json", point_to_json(y))
    return x, y, fx, fy


def test_metric_identity(cube_pair, capsys):
    _, _, fx, _ = cube_pair
    assert run(["metric", fx, fx]) == 0
    assert capsys.readouterr().out.strip() == "0/1"


def test_metric_alternating_example(tmp_path, capsys):
    # binary sequences mismatching exactly at odd offsets: sum is 4/3
    space = ShiftSpace("full", alphabet=2).value_space()
    x = constant_seq(space, 0)
    y = periodic_seq(space, (0, 1))
    fx = write_json(tmp_path / "a.json", point_to_json(x))
    fy = write_json(tmp_path / "b.json", point_to_json(y))
    assert run(["metric", fx, fy]) == 0
    got = capsys.readouterr().out.strip()
    num, den = got.split("/")
    assert Fraction(int(num), int(den)) == Fraction(4, 3)


def test_metric_malformed_input_exits_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["metric", bad, bad]) == 2


def test_hyper_identity_singleton(tmp_path, cube_pair):
    x, _, _, _ = cube_pair
    a = write_json(tmp_path / "A.json", FiniteCompact(CUBE, (x,)).to_json())
    cfg = write_json(tmp_path / "cfg.json", {"eps": "1/4", "delta": "1/16"})
    out = tmp_path / "out"
    code = run(["--config", cfg, "--out", out, "--horizon", "8", "hyper", a, a])
    assert code == 0
    csv_text = (out / "decay.csv").read_text()
    lines = csv_text.strip().splitlines()
    assert lines[0] == "n,d_H_forward,d_H_backward,bound,d_H_forward_dec,d_H_backward_dec"
    assert lines[1].startswith("0,0/1,0/1,")
    assert (out / "decay.png").stat().st_size > 0
    report = json.loads((out / "hyper.json").read_text())
    assert report["passed"] is True


def test_hyper_delta_too_large_exits_3(tmp_path, cube_pair):
    x, _, _, _ = cube_pair
    y = with_values(x, {0: Fraction(0)})
    a = write_json(tmp_path / "A.json", FiniteCompact(CUBE, (x,)).to_json())
    b = write_json(tmp_path / "B.json", FiniteCompact(CUBE, (y,)).to_json())
    cfg = write_json(tmp_path / "cfg.json", {"eps": "1/4", "delta": "1/16"})
    assert run(["--config", cfg, "--out", tmp_path / "o", "hyper", a, b]) == 3


def test_uniformity_cube_closed_form(tmp_path):
    cfg = write_json(
        tmp_path / "cfg.json",
        {"space": {"kind": "cube"}, "eps": "1/4", "delta": "1/16", "r": "1/100", "samples": 5},
    )
    out = tmp_path / "out"
    assert run(["--config", cfg, "--seed", "3", "--out", out, "--horizon", "64", "uniformity"]) == 0
    rep = json.loads((out / "uniformity.json").read_text())
    assert rep["closed_form"] == 7
    assert rep["estimate"] is not None and rep["estimate"] <= 7


def test_uniformity_bad_rate_exits_2(tmp_path):
    cfg = write_json(
        tmp_path / "cfg.json",
        {"space": {"kind": "cube"}, "eps": "1/4", "delta": "1/16", "r": "1/2"},
    )
    assert run(["--config", cfg, "--out", tmp_path / "o", "uniformity"]) == 2


def test_uniformity_horizon_exhausted_exits_4(tmp_path):
    # full-shift pairs flip symbols at offsets >= 6, so the splice still
    # weighs more than 1/4096 at iterate 1: no deadline fits horizon 1
    cfg = write_json(
        tmp_path / "cfg.json",
        {
            "space": {"kind": "full", "alphabet": 2},
            "eps": "1/4",
            "delta": "1/16",
            "r": "1/4096",
            "samples": 3,
        },
    )
    out = tmp_path / "out"
    assert run(["--config", cfg, "--seed", "3", "--out", out, "--horizon", "1", "uniformity"]) == 4
    # the partial report is still written
    assert json.loads((out / "uniformity.json").read_text())["estimate"] is None


def test_counterexample_cube(tmp_path):
    cfg = write_json(
        tmp_path / "cfg.json",
        {
            "kind": "cube",
            "eps": "1/4",
            "delta": "1/16",
            "r": "1/50",
            "claimed_deadline": 40,
        },
    )
    out = tmp_path / "out"
    assert run(["--config", cfg, "--seed", "5", "--out", out, "counterexample"]) == 0
    rep = json.loads((out / "counterexample.json").read_text())
    assert rep["report"]["refutes_uniformity"] is True
    assert rep["report"]["n"] == 33


def test_counterexample_product(tmp_path):
    cfg = write_json(
        tmp_path / "cfg.json",
        {"kind": "product", "primes": [2, 3], "n_eps": 1, "i_range": [1, 10]},
    )
    out = tmp_path / "out"
    assert run(["--config", cfg, "--out", out, "counterexample"]) == 0
    rep = json.loads((out / "counterexample.json").read_text())
    assert rep["displacement_constant"] and rep["distance_decreasing"] and rep["verified"]
    assert len(rep["witnesses"]) == 10
    assert (out / "counterexample.png").stat().st_size > 0


def test_counterexample_missing_primes_exits_2(tmp_path):
    cfg = write_json(tmp_path / "cfg.json", {"kind": "product"})
    assert run(["--config", cfg, "--out", tmp_path / "o", "counterexample"]) == 2


def test_counterexample_regime_violation_exits_2(tmp_path):
    cfg = write_json(
        tmp_path / "cfg.json",
        {"kind": "cube", "eps": "1/4", "delta": "1/16", "r": "1/50", "claimed_deadline": 5},
    )
    assert run(["--config", cfg, "--out", tmp_path / "o", "counterexample"]) == 2


def test_shadow_command(tmp_path, cube_pair):
    x, _, fx, _ = cube_pair
    cfg = write_json(
        tmp_path / "cfg.json",
        {
            "space": {"kind": "cube"},
            "eps": "1/4",
            "jumps": [{"index": 3, "kind": "nudge", "coord": 0, "amount": "1/32"}],
        },
    )
    out = tmp_path / "out"
    assert run(["--config", cfg, "--out", out, "shadow", fx]) == 0
    rep = json.loads((out / "shadow.json").read_text())
    assert rep["report"]["pass_eps"] and rep["report"]["pass_limit"]
    assert rep["delta"] == "1/32"
    assert (out / "shadow.png").stat().st_size > 0


def test_shadow_illegal_jump_exits_2(tmp_path):
    x = constant_seq(UNIT, Fraction(63, 64))
    fx = write_json(tmp_path / "x.json", point_to_json(x))
    cfg = write_json(
        tmp_path / "cfg.json",
        {
            "space": {"kind": "cube"},
            "eps": "1/4",
            "jumps": [{"index": 0, "kind": "nudge", "coord": 0, "amount": "1/8"}],
        },
    )
    assert run(["--config", cfg, "--out", tmp_path / "o", "shadow", fx]) == 2


def test_cli_outputs_are_byte_deterministic(tmp_path, cube_pair):
    x, y, _, _ = cube_pair
    a = write_json(tmp_path / "A.json", FiniteCompact(CUBE, (x,)).to_json())
    b = write_json(tmp_path / "B.json", FiniteCompact(CUBE, (y,)).to_json())
    cfg = write_json(tmp_path / "cfg.json", {"eps": "1/4", "delta": "1/16"})
    blobs = []
    for name in ("r1", "r2"):
        out = tmp_path / name
        assert run(["--config", cfg, "--out", out, "--horizon", "16", "hyper", a, b]) == 0
        blobs.append(
            tuple((out / f).read_bytes() for f in ("decay.csv", "hyper.json", "decay.png"))
        )
    assert blobs[0] == blobs[1]

    ucfg = write_json(
        tmp_path / "ucfg.json",
        {"space": {"kind": "cube"}, "eps": "1/4", "delta": "1/16", "r": "1/64", "samples": 6},
    )
    ublobs = []
    for name in ("u1", "u2"):
        out = tmp_path / name
        assert run(["--config", ucfg, "--seed", "9", "--out", out, "--horizon", "64", "uniformity"]) == 0
        ublobs.append((out / "uniformity.json").read_bytes())
    assert ublobs[0] == ublobs[1]
