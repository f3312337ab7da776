"""Batch command-line front end.

Subcommands wrap the library's constructions and verifications with
reproducible configs and machine-readable reports.  Rationals cross the
boundary as "num/den" strings; CSV rows carry the exact strings plus a
decimal convenience column (informational only).  Exit codes: 0 verified,
2 usage/parse error, 3 precondition violation, 4 horizon/resource exhausted.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from random import Random

from .cubeshift import (
    BoxMembershipError,
    PreconditionError,
    contraction_time,
    nonuniformity_report,
)
from .graphshift import (
    base_point,
    loop_switch_displacement,
    loop_switch_point,
    validate_walk,
)
from .hyperspace import FiniteCompact, PairingError, verify_covering
from .plotting import render_decay_curves, render_displacement, render_shadow_window
from .sampling import cube_close_pair
from .seqspace import encode_fraction
from .shadowing import (
    IllegalPerturbationError,
    ShadowRepairError,
    estimate_contraction_deadline,
    perturb_orbit,
    shadow_point,
    verify_shadowing,
)
from .spaces import ShiftSpace, SpliceError, point_dist, point_from_json, point_shift

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PRECONDITION = 3
EXIT_RESOURCE = 4


class UsageError(ValueError):
    pass


def _parse_fraction(s) -> Fraction:
    if isinstance(s, str) and "/" in s:
        num, den = s.split("/", 1)
        return Fraction(int(num), int(den))
    if isinstance(s, (int, str)):
        return Fraction(int(s))
    raise UsageError(f"rationals must be 'num/den' strings, got {s!r}")


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read JSON from {path}: {exc}")


def _atomic_write(path, data: str) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        fh.write(data)
    os.replace(tmp, path)


def _write_json(path, obj) -> None:
    _atomic_write(path, json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _dec(v: Fraction) -> str:
    return f"{float(v):.12g}"


class Config:
    """Merged view of the JSON config file and command-line overrides."""

    def __init__(self, args):
        self.raw = _load_json(args.config) if args.config else {}
        self.seed = args.seed if args.seed is not None else int(self.raw.get("seed", 0))
        self.horizon = (
            args.horizon if args.horizon is not None else int(self.raw.get("horizon", 32))
        )
        self.out = args.out if args.out is not None else self.raw.get("out", ".")

    def space(self) -> ShiftSpace:
        if "space" not in self.raw:
            raise UsageError("config must declare a space")
        return ShiftSpace.from_json(self.raw["space"])

    def fraction(self, key, default=None) -> Fraction:
        if key not in self.raw:
            if default is None:
                raise UsageError(f"config must declare {key}")
            return Fraction(default)
        return _parse_fraction(self.raw[key])

    def integer(self, key, default=None) -> int:
        if key not in self.raw:
            if default is None:
                raise UsageError(f"config must declare {key}")
            return int(default)
        return int(self.raw[key])


def _out_path(cfg: Config, name: str) -> str:
    os.makedirs(cfg.out, exist_ok=True)
    return os.path.join(cfg.out, name)


# -- subcommands ----------------------------------------------------------------


def cmd_metric(cfg: Config, args) -> int:
    try:
        x = point_from_json(_load_json(args.points[0]))
        y = point_from_json(_load_json(args.points[1]))
        d = point_dist(x, y).value
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed point file: {exc}")
    print(encode_fraction(d))
    return EXIT_OK


def cmd_hyper(cfg: Config, args) -> int:
    a = FiniteCompact.from_json(_load_json(args.set_a))
    b = FiniteCompact.from_json(_load_json(args.set_b))
    eps = cfg.fraction("eps")
    delta = cfg.fraction("delta")
    policy = cfg.raw.get("policy", "covering_pairs")
    report = verify_covering(a, b, eps, delta, cfg.horizon, policy=policy)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["n", "d_H_forward", "d_H_backward", "bound", "d_H_forward_dec", "d_H_backward_dec"])
    for n, fwd, bwd, bound in report.rows():
        writer.writerow(
            [n, encode_fraction(fwd), encode_fraction(bwd), encode_fraction(bound), _dec(fwd), _dec(bwd)]
        )
    _atomic_write(_out_path(cfg, "decay.csv"), buf.getvalue())
    _write_json(_out_path(cfg, "hyper.json"), report.to_json())
    render_decay_curves(report, _out_path(cfg, "decay.png"))
    return EXIT_OK if report.passed else EXIT_PRECONDITION


def cmd_uniformity(cfg: Config, args) -> int:
    space = cfg.space()
    eps = cfg.fraction("eps")
    delta = cfg.fraction("delta")
    r = cfg.fraction("r")
    samples = cfg.integer("samples", 20)
    if r >= eps:
        raise UsageError(f"need r < eps, got r={r}, eps={eps}")
    estimate = estimate_contraction_deadline(
        space, eps, delta, r, samples, cfg.horizon, cfg.seed
    )
    obj = {
        "space": space.to_json(),
        "eps": encode_fraction(eps),
        "delta": encode_fraction(delta),
        "r": encode_fraction(r),
        "samples": samples,
        "horizon": cfg.horizon,
        "seed": cfg.seed,
        "estimate": estimate,
        "closed_form": contraction_time(eps, r) if space.kind == "cube" else None,
    }
    _write_json(_out_path(cfg, "uniformity.json"), obj)
    return EXIT_OK if estimate is not None else EXIT_RESOURCE


def _counterexample_cube(cfg: Config) -> int:
    eps = cfg.fraction("eps")
    delta = cfg.fraction("delta")
    r = cfg.fraction("r")
    claim = cfg.integer("claimed_deadline")
    x, y = cube_close_pair(Random(cfg.seed), eps, delta)
    try:
        rep = nonuniformity_report(eps, delta, r, claim, x, y)
    except PreconditionError as exc:
        raise UsageError(f"regime violation: {exc}")
    obj = {
        "kind": "cube",
        "eps": encode_fraction(eps),
        "delta": encode_fraction(delta),
        "r": encode_fraction(r),
        "seed": cfg.seed,
        "report": rep.to_json(),
    }
    _write_json(_out_path(cfg, "counterexample.json"), obj)
    return EXIT_OK if rep.refutes_uniformity else EXIT_PRECONDITION


def _counterexample_product(cfg: Config) -> int:
    if "primes" not in cfg.raw:
        raise UsageError("product counterexamples need a primes list")
    primes = tuple(int(p) for p in cfg.raw["primes"])
    n_eps = cfg.integer("n_eps", 1)
    i_lo, i_hi = (int(v) for v in cfg.raw.get("i_range", (1, 10)))
    try:
        x = base_point(primes, len(primes) - 1)
    except ValueError as exc:
        raise UsageError(str(exc))
    rows, displacements, distances = [], [], []
    for i in range(i_lo, i_hi + 1):
        z = loop_switch_point(x, n_eps, i)
        disp = loop_switch_displacement(x, z, n_eps, i).value
        dist = point_dist(x, z).value
        ok = all(validate_walk(f, z.graph(n)) for n, f in enumerate(z.factors, start=1))
        rows.append({"i": i, "displacement": encode_fraction(disp), "distance": encode_fraction(dist), "valid_walk": ok})
        displacements.append((i, disp))
        distances.append(dist)
    constant = len({d for _, d in displacements}) == 1
    decreasing = all(a > b for a, b in zip(distances, distances[1:]))
    valid = all(row["valid_walk"] for row in rows)
    obj = {
        "kind": "product",
        "primes": list(primes),
        "n_eps": n_eps,
        "witnesses": rows,
        "displacement_constant": constant,
        "distance_decreasing": decreasing,
        "verified": constant and decreasing and valid,
    }
    _write_json(_out_path(cfg, "counterexample.json"), obj)
    render_displacement(
        displacements, _out_path(cfg, "counterexample.png"), "i", "loop-switch displacement"
    )
    return EXIT_OK if obj["verified"] else EXIT_PRECONDITION


def cmd_counterexample(cfg: Config, args) -> int:
    kind = cfg.raw.get("kind")
    if kind == "cube":
        return _counterexample_cube(cfg)
    if kind == "product":
        return _counterexample_product(cfg)
    raise UsageError("counterexample config needs kind 'cube' or 'product'")


def _parse_jump(obj):
    k = int(obj["index"])
    kind = obj["kind"]
    if kind == "nudge":
        return k, ("nudge", int(obj["coord"]), _parse_fraction(obj["amount"]))
    if kind == "set_symbols":
        return k, ("set_symbols", {int(i): int(v) for i, v in obj["symbols"].items()})
    if kind == "loop_switch":
        return k, ("loop_switch", int(obj["factor"]), int(obj["loops"]))
    if kind == "replace":
        return k, ("replace", point_from_json(obj["point"]))
    raise UsageError(f"unknown jump kind {kind!r}")


def cmd_shadow(cfg: Config, args) -> int:
    space = cfg.space()
    eps = cfg.fraction("eps")
    x = point_from_json(_load_json(args.point))
    try:
        jumps = [_parse_jump(j) for j in cfg.raw.get("jumps", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed jump: {exc}")
    P = perturb_orbit(space, x, jumps, tail=cfg.integer("tail", 4))
    z = shadow_point(P, eps=eps)
    rep = verify_shadowing(P, z, eps)
    obj = {
        "space": space.to_json(),
        "eps": encode_fraction(eps),
        "pseudo_orbit": P.to_json(),
        "delta": encode_fraction(P.delta()),
        "report": rep.to_json(),
    }
    _write_json(_out_path(cfg, "shadow.json"), obj)
    ks = list(range(P.first_index, P.last_index + 1))
    dists = [point_dist(point_shift(z, k), P.orbit_point(k)).value for k in ks]
    render_shadow_window(ks, dists, eps, _out_path(cfg, "shadow.png"))
    return EXIT_OK if rep.pass_eps and rep.pass_limit else EXIT_PRECONDITION


# -- entry point ------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shiftshadow")
    parser.add_argument("--config", help="JSON experiment config")
    parser.add_argument("--seed", type=int, help="override the config seed")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--horizon", type=int, help="override the config horizon")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("metric", help="exact distance between two point files")
    p.add_argument("points", nargs=2)
    p.set_defaults(func=cmd_metric)

    p = sub.add_parser("hyper", help="two-sided decay verification for two set files")
    p.add_argument("set_a")
    p.add_argument("set_b")
    p.set_defaults(func=cmd_hyper)

    p = sub.add_parser("uniformity", help="estimate the contraction deadline")
    p.set_defaults(func=cmd_uniformity)

    p = sub.add_parser("counterexample", help="uniformity-refuting witnesses")
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("shadow", help="perturb, shadow, and verify a pseudo-orbit")
    p.add_argument("point")
    p.set_defaults(func=cmd_shadow)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        cfg = Config(args)
        return args.func(cfg, args)
    except (UsageError, IllegalPerturbationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PreconditionError, PairingError, SpliceError, BoxMembershipError, ShadowRepairError) as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
