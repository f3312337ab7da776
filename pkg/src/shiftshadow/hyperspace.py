"""Finite compacta, the exact Hausdorff metric, the induced set map, and
the spliced shadowing set with its two-sided decay verification."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .cubeshift import PreconditionError, contraction_time
from .seqspace import ExactDist, encode_fraction
from .spaces import (
    ShiftSpace,
    distance_curve,
    point_dist,
    point_shift,
    point_to_json,
)


class PairingError(ValueError):
    """Some point of one set has no partner within delta in the other."""


def _point_key(point) -> str:
    return json.dumps(point_to_json(point), sort_keys=True)


@dataclass(frozen=True, eq=False)
class FiniteCompact:
    """Nonempty finite set of points of one shift space, deduplicated under
    canonical equality and stored in a deterministic order."""

    space: ShiftSpace
    points: tuple

    def __post_init__(self):
        if not self.points:
            raise ValueError("a compact set must be nonempty")
        seen = {}
        for p in self.points:
            if not self.space.contains(p):
                raise ValueError("point does not belong to the declared space")
            seen.setdefault(_point_key(p), p)
        ordered = tuple(seen[k] for k in sorted(seen))
        object.__setattr__(self, "points", ordered)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __eq__(self, other):
        if not isinstance(other, FiniteCompact):
            return NotImplemented
        return self.space == other.space and set(map(_point_key, self.points)) == set(
            map(_point_key, other.points)
        )

    def __hash__(self):
        return hash((self.space, tuple(sorted(map(_point_key, self.points)))))

    def to_json(self) -> dict:
        return {"space": self.space.to_json(), "points": [point_to_json(p) for p in self.points]}

    @staticmethod
    def from_json(obj: dict) -> "FiniteCompact":
        from .spaces import point_from_json

        space = ShiftSpace.from_json(obj["space"])
        return FiniteCompact(space, tuple(point_from_json(p) for p in obj["points"]))


def hausdorff(a: FiniteCompact, b: FiniteCompact) -> ExactDist:
    """max of the two directed max-min distances, all exact rationals."""
    if a.space != b.space:
        raise ValueError("sets live in different spaces")
    rows = [[point_dist(x, y).value for y in b.points] for x in a.points]
    forward = max(min(row) for row in rows)
    backward = max(min(rows[i][j] for i in range(len(a.points))) for j in range(len(b.points)))
    return ExactDist(max(forward, backward))


def induced_map(a: FiniteCompact, k: int) -> FiniteCompact:
    """Image of the set under the k-th power of the shift."""
    return FiniteCompact(a.space, tuple(point_shift(p, k) for p in a.points))


@dataclass(frozen=True)
class PairSet:
    pairs: tuple  # of (a, b)
    delta: Fraction


def close_pairs(a: FiniteCompact, b: FiniteCompact, delta: Fraction, policy: str = "covering_pairs") -> PairSet:
    """Pairs (x, y) in A x B with d(x, y) <= delta.

    ``all_pairs`` keeps every such pair; ``covering_pairs`` keeps, for each
    point on either side, one nearest partner (ties broken by serialization
    order), a minimal subfamily still covering both sides.
    """
    delta = Fraction(delta)
    if policy not in ("all_pairs", "covering_pairs"):
        raise ValueError(f"unknown pairing policy {policy!r}")
    d = {(i, j): point_dist(x, y).value for i, x in enumerate(a.points) for j, y in enumerate(b.points)}
    for i, x in enumerate(a.points):
        if all(d[i, j] > delta for j in range(len(b.points))):
            raise PairingError(f"point {i} of the first set has no partner within {delta}")
    for j in range(len(b.points)):
        if all(d[i, j] > delta for i in range(len(a.points))):
            raise PairingError(f"point {j} of the second set has no partner within {delta}")
    if policy == "all_pairs":
        chosen = [(i, j) for (i, j), v in sorted(d.items()) if v <= delta]
    else:
        chosen = set()
        for i in range(len(a.points)):
            j_best = min(range(len(b.points)), key=lambda j: (d[i, j], j))
            chosen.add((i, j_best))
        for j in range(len(b.points)):
            i_best = min(range(len(a.points)), key=lambda i: (d[i, j], i))
            chosen.add((i_best, j))
        chosen = sorted(chosen)
    pairs = tuple((a.points[i], b.points[j]) for i, j in chosen)
    return PairSet(pairs, delta)


def splice_set(
    a: FiniteCompact,
    b: FiniteCompact,
    eps: Fraction,
    delta: Fraction,
    policy: str = "covering_pairs",
    window: int = 4,
) -> FiniteCompact:
    """One canonical splice point per close pair: the finite shadowing set."""
    from .spaces import splice_point

    eps, delta = Fraction(eps), Fraction(delta)
    dh = hausdorff(a, b).value
    if dh >= delta:
        raise PreconditionError(f"Hausdorff distance {dh} is not below delta = {delta}")
    if a.space.kind == "cube" and delta > eps / 4:
        raise PreconditionError("cube splices need delta <= eps/4")
    psi = close_pairs(a, b, delta, policy)
    points = []
    for x, y in psi.pairs:
        try:
            points.append(splice_point(a.space, x, y, eps=eps, window=window))
        except ValueError as exc:
            raise type(exc)(f"splice failed for pair ({_point_key(x)}, {_point_key(y)}): {exc}")
    return FiniteCompact(a.space, tuple(points))


def _hausdorff_curves(c: FiniteCompact, a: FiniteCompact, ks) -> dict:
    """k -> d_H(f^k(C), f^k(A)) evaluated through exact distance curves."""
    ks = list(ks)
    curves = {}
    for z in c.points:
        for x in a.points:
            curves[z, x] = distance_curve(z, x, ks)
    out = {}
    for k in ks:
        forward = max(min(curves[z, x][k] for x in a.points) for z in c.points)
        backward = max(min(curves[z, x][k] for z in c.points) for x in a.points)
        out[k] = max(forward, backward)
    return out


@dataclass(frozen=True)
class CoveringReport:
    """Exact decay curves of the spliced set against both endpoints."""

    eps: Fraction
    delta: Fraction
    horizon: int
    forward: tuple  # d_H(f^n C, f^n A) for n = 0..horizon
    backward: tuple  # d_H(f^-n C, f^-n B) for n = 0..horizon
    rate_checks: tuple  # of (r, k_r, ok)
    failures: tuple  # human-readable violation strings
    passed: bool

    def rows(self):
        """CSV rows: n, exact forward/backward distances, and the tightest
        bound in force at n (eps, sharpened by every rate whose deadline
        has passed)."""
        for n in range(self.horizon + 1):
            bound = min([self.eps] + [r for r, k_r, _ in self.rate_checks if k_r <= n])
            yield n, self.forward[n], self.backward[n], bound

    def to_json(self) -> dict:
        return {
            "eps": encode_fraction(self.eps),
            "delta": encode_fraction(self.delta),
            "horizon": self.horizon,
            "forward": [encode_fraction(v) for v in self.forward],
            "backward": [encode_fraction(v) for v in self.backward],
            "rate_checks": [
                {"r": encode_fraction(r), "k_r": k, "ok": ok} for r, k, ok in self.rate_checks
            ],
            "failures": list(self.failures),
            "passed": self.passed,
        }


def verify_covering(
    a: FiniteCompact,
    b: FiniteCompact,
    eps: Fraction,
    delta: Fraction,
    horizon: int,
    policy: str = "covering_pairs",
    window: int = 4,
) -> CoveringReport:
    """Build the spliced set C and check exactly that it eps-tracks A
    forward and B backward up to the horizon; on the cube, additionally
    check the dyadic contraction schedule r = eps/2^j from its closed-form
    deadline on."""
    eps, delta = Fraction(eps), Fraction(delta)
    c = splice_set(a, b, eps, delta, policy, window)
    fwd = _hausdorff_curves(c, a, range(0, horizon + 1))
    bwd = _hausdorff_curves(c, b, range(0, -horizon - 1, -1))
    failures = []
    for n in range(horizon + 1):
        if fwd[n] > eps:
            failures.append(f"forward n={n}: d_H={fwd[n]} > eps")
        if bwd[-n] > eps:
            failures.append(f"backward n={n}: d_H={bwd[-n]} > eps")
    rate_checks = []
    if a.space.kind == "cube":
        j = 1
        while True:
            r = eps / Fraction(2) ** j
            k_r = contraction_time(eps, r)
            if k_r > horizon:
                break
            ok = True
            for n in range(k_r, horizon + 1):
                if fwd[n] > r or bwd[-n] > r:
                    ok = False
                    failures.append(f"rate r={r}: violated at n={n}")
            rate_checks.append((r, k_r, ok))
            j += 1
    forward = tuple(fwd[n] for n in range(horizon + 1))
    backward = tuple(bwd[-n] for n in range(horizon + 1))
    return CoveringReport(
        eps=eps,
        delta=delta,
        horizon=horizon,
        forward=forward,
        backward=backward,
        rate_checks=tuple(rate_checks),
        failures=tuple(failures),
        passed=not failures,
    )
