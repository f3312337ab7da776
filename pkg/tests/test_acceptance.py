"""Acceptance suite: ten exact, seeded, desk-scale checks of the library's
core guarantees, one test per criterion."""

import json
from fractions import Fraction
from random import Random

from shiftshadow.cli import main as cli_main
from shiftshadow.cubeshift import (
    DBox,
    box_splice,
    contraction_time,
    dbox_diameter,
    nonuniformity_report,
)
from shiftshadow.graphshift import (
    base_point,
    loop_switch_displacement,
    loop_switch_point,
    validate_walk,
)
from shiftshadow.hyperspace import FiniteCompact, hausdorff, verify_covering
from shiftshadow.sampling import (
    cube_close_pair,
    cube_set_pair,
    random_discrete_point,
    random_unit_point,
    single_jump,
)
from shiftshadow.seqspace import UNIT, constant_seq, seq_metric, value_at
from shiftshadow.shadowing import perturb_orbit, rate_membership, shadow_point, verify_shadowing
from shiftshadow.spaces import (
    ShiftSpace,
    point_agreement,
    point_dist,
    point_shift,
    point_to_json,
    splice_point,
)

CUBE = ShiftSpace("cube")
FULL2 = ShiftSpace("full", alphabet=2)
EPS = Fraction(1, 4)


def truncated_metric(x, y, n=64):
    dist = x.space.coord_dist
    return sum(
        (dist(value_at(x, i), value_at(y, i)) * Fraction(1, 2 ** abs(i)) for i in range(-n, n + 1)),
        Fraction(0),
    )


def test_criterion_01_metric_oracle_equivalence():
    rng = Random(101)
    bound = 3 * Fraction(1, 2**64)
    for k in range(1000):
        if k % 2:
            x, y = random_unit_point(rng), random_unit_point(rng)
        else:
            x, y = random_discrete_point(rng, 4), random_discrete_point(rng, 4)
        d = seq_metric(x, y).value
        assert abs(d - truncated_metric(x, y)) <= bound
        # independent evaluation order: wider central window, shorter tails
        assert d == seq_metric(x, y, _pad=7).value


def test_criterion_02_dbox_bounds():
    rng = Random(202)
    for _ in range(200):
        eps = Fraction(rng.randrange(1, 16), 64)
        side = rng.choice(("stable", "unstable"))
        b = DBox(random_unit_point(rng), eps, side)
        d0 = dbox_diameter(b, 0)
        assert eps <= d0 <= 4 * eps
        sgn = 1 if side == "stable" else -1
        for n in range(21):
            assert dbox_diameter(b, sgn * n) == d0 / Fraction(2) ** n
    interior = DBox(constant_seq(UNIT, Fraction(1, 2)), Fraction(1, 8), "stable")
    assert dbox_diameter(interior, 0) == 2 * Fraction(1, 8)


def test_criterion_03_closed_form_contraction_time():
    assert contraction_time(Fraction(1, 4), Fraction(1, 100)) == 7
    rng = Random(303)
    for _ in range(100):
        eps = Fraction(rng.randrange(2, 512), 1024)
        r = Fraction(rng.randrange(1, 1024), 4096)
        if not r < eps:
            continue
        k = contraction_time(eps, r)
        assert eps / Fraction(2) ** (k - 2) < r
        kk = 1
        while eps / Fraction(2) ** (kk - 2) >= r:
            kk += 1
        assert k == kk


def test_criterion_04_box_splice_rate_membership():
    rng = Random(404)
    fam = []
    j = 1
    while True:
        r = EPS / 2**j
        k_r = contraction_time(EPS, r)
        if k_r > 64:
            break
        fam.append((r, k_r))
        j += 1
    for _ in range(200):
        x, y = cube_close_pair(rng, EPS, EPS / 4)
        assert seq_metric(x, y).value < EPS / 4
        z = box_splice(x, y, EPS)  # membership verified coordinate-exactly inside
        for i in range(-8, 9):
            expected = value_at(x, i) if i >= 0 else value_at(y, i)
            assert value_at(z, i) == expected
        assert rate_membership(z, x, y, EPS, fam, horizon=64).member


def test_criterion_05_shift_nonuniformity():
    eps, delta, r = Fraction(1, 4), Fraction(1, 16), Fraction(1, 50)
    rng = Random(505)
    x, y = cube_close_pair(rng, eps, delta)
    for m in (34, 50, 100):
        rep = nonuniformity_report(eps, delta, r, m, x, y)
        assert rep.n == 33
        assert rep.stable_ok and rep.unstable_ok  # V^s_eps(x) and V^u_eps(y) membership
        assert rep.displacement >= Fraction(1, 33) > Fraction(1, 50)
        assert rep.refutes_uniformity


def test_criterion_06_loop_switch_invariants():
    x = base_point((2, 3, 5), 2)
    p = 2
    disps, dists = [], []
    for i in range(1, 11):
        z = loop_switch_point(x, 1, i)
        for n, f in enumerate(z.factors, start=1):
            assert validate_walk(f, z.graph(n))
        disp = loop_switch_displacement(x, z, 1, i).value
        # recompute the mismatch sum from coordinates at the i*p-th iterate
        direct = point_dist(point_shift(x, i * p), point_shift(z, i * p)).value
        assert disp == direct
        disps.append(disp)
        dists.append(point_dist(x, z).value)
        assert point_agreement(x, z, "forward") is not None
        assert point_agreement(x, z, "backward") is not None
    assert len(set(disps)) == 1
    assert all(a > b for a, b in zip(dists, dists[1:]))


def test_criterion_07_two_sided_covering_forward():
    rng = Random(707)
    for _ in range(50):
        a, b = cube_set_pair(rng, EPS, EPS / 4)
        assert len(a) <= 6 and len(b) <= 6
        assert hausdorff(a, b).value < EPS / 4
        rep = verify_covering(a, b, EPS, EPS / 4, horizon=64)
        assert rep.passed, rep.failures
        assert rep.rate_checks and all(ok for _, _, ok in rep.rate_checks)


def test_criterion_08_singleton_lift_converse():
    rng = Random(808)
    for trial in range(50):
        space = CUBE if trial % 2 else FULL2
        x, jumps = single_jump(rng, space, EPS)
        P = perturb_orbit(space, x, jumps)
        z = shadow_point(P, eps=EPS)
        # singleton lifts: hyperspace distances equal point distances term by term
        for k in range(P.first_index, P.last_index + 1):
            lift_z = FiniteCompact(space, (point_shift(z, k),))
            lift_x = FiniteCompact(space, (P.orbit_point(k),))
            assert hausdorff(lift_z, lift_x).value == point_dist(point_shift(z, k), P.orbit_point(k)).value
        # any member of the spliced shadowing set shadows the pseudo-orbit
        starts = P.leg_starts
        u_first = point_shift(P.legs[0][0], -starts[0])
        u_last = point_shift(P.legs[-1][0], -starts[-1])
        w = splice_point(space, u_last, u_first, eps=EPS)
        rep = verify_shadowing(P, w, EPS)
        assert rep.pass_eps and rep.pass_limit


def test_criterion_09_shadowing_engine():
    rng = Random(909)
    for trial in range(200):
        space = CUBE if trial % 2 else FULL2
        x, jumps = single_jump(rng, space, EPS)
        P = perturb_orbit(space, x, jumps)
        delta = P.delta()
        assert delta < EPS / 4
        z = shadow_point(P, eps=EPS)
        rep = verify_shadowing(P, z, EPS)
        assert rep.pass_eps and rep.pass_limit
        # a single jump at coordinate c displaces the readout by at most
        # delta * 2^|c| (the nudge's own magnitude)
        coord = jumps[0][1][1] if jumps[0][1][0] == "nudge" else list(jumps[0][1][1])[0]
        assert rep.sup_dist <= delta * Fraction(2) ** abs(int(coord))


def test_criterion_10_cli_determinism(tmp_path):
    x = constant_seq(UNIT, Fraction(1, 2))
    y = point_shift(x, 0)
    from shiftshadow.seqspace import with_values

    y = with_values(x, {-1: Fraction(1, 2) + Fraction(1, 40)})
    fa = tmp_path / "A.json"
    fa.write_text(json.dumps(FiniteCompact(CUBE, (x,)).to_json()))
    fb = tmp_path / "B.json"
    fb.write_text(json.dumps(FiniteCompact(CUBE, (y,)).to_json()))
    fx = tmp_path / "x.json"
    fx.write_text(json.dumps(point_to_json(x)))
    fy = tmp_path / "y.json"
    fy.write_text(json.dumps(point_to_json(y)))
    hyper_cfg = tmp_path / "hyper.json"
    hyper_cfg.write_text(json.dumps({"eps": "1/4", "delta": "1/16"}))
    uni_cfg = tmp_path / "uni.json"
    uni_cfg.write_text(
        json.dumps({"space": {"kind": "cube"}, "eps": "1/4", "delta": "1/16", "r": "1/64", "samples": 5})
    )
    cx_cfg = tmp_path / "cx.json"
    cx_cfg.write_text(
        json.dumps({"kind": "cube", "eps": "1/4", "delta": "1/16", "r": "1/50", "claimed_deadline": 40})
    )
    sh_cfg = tmp_path / "sh.json"
    sh_cfg.write_text(
        json.dumps(
            {
                "space": {"kind": "cube"},
                "eps": "1/4",
                "jumps": [{"index": 2, "kind": "nudge", "coord": 0, "amount": "1/32"}],
            }
        )
    )
    invocations = [
        (["--config", str(hyper_cfg), "--horizon", "16", "hyper", str(fa), str(fb)],
         ("decay.csv", "hyper.json", "decay.png")),
        (["--config", str(uni_cfg), "--seed", "7", "--horizon", "32", "uniformity"],
         ("uniformity.json",)),
        (["--config", str(cx_cfg), "--seed", "7", "counterexample"],
         ("counterexample.json",)),
        (["--config", str(sh_cfg), "shadow", str(fx)],
         ("shadow.json", "shadow.png")),
    ]
    for args, files in invocations:
        blobs = []
        for rerun in ("one", "two"):
            out = tmp_path / f"{files[0]}.{rerun}"
            assert cli_main(["--out", str(out)] + args) == 0
            blobs.append(tuple((out / f).read_bytes() for f in files))
        assert blobs[0] == blobs[1]
