"""Pseudo-orbits with finitely many jumps, the central-coordinate shadow
construction, exact shadowing verification, two-sided membership reports,
and seeded estimation of uniform contraction deadlines.

Pseudo-orbits here are "eventually exact": beyond the first and last legs
they follow true orbits, so all step errors vanish identically outside a
finite window and limit-shadowing is certified by finite agreement indices
instead of asymptotic tolerance tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from random import Random

from .cubeshift import PreconditionError
from .graphshift import LoopGraph, ProductPoint, loop_switch_point, splice_walks, validate_walk
from .seqspace import BiSeq, encode_fraction, shift, splice, value_at, with_values
from .spaces import (
    ShiftSpace,
    distance_curve,
    log2_ceil,
    point_agreement,
    point_dist,
    point_from_json,
    point_shift,
    point_to_json,
    splice_point,
)


class IllegalPerturbationError(ValueError):
    """A jump descriptor leaves the space (coordinate range, walk validity)."""


class ShadowRepairError(ValueError):
    """The graph readout could not be repaired to a valid walk."""

    def __init__(self, position: int, message: str):
        super().__init__(f"at index {position}: {message}")
        self.position = position


@dataclass(frozen=True)
class PseudoOrbit:
    """Finitely many true orbit legs glued at junctions.

    Leg j contributes the segment start_j, f(start_j), ..., f^{len_j - 1}(start_j);
    outside the declared window the pseudo-orbit follows the true orbits of
    the endpoint legs, so every error beyond the junctions is exactly zero.
    """

    space: ShiftSpace
    legs: tuple  # of (start_point, length)
    first_index: int = 0

    def __post_init__(self):
        legs = tuple((s, int(n)) for s, n in self.legs)
        object.__setattr__(self, "legs", legs)
        if not legs:
            raise ValueError("a pseudo-orbit needs at least one leg")
        for s, n in legs:
            if n < 1:
                raise ValueError("leg lengths must be positive")
            if not self.space.contains(s):
                raise ValueError("leg start does not belong to the declared space")

    @property
    def leg_starts(self) -> tuple:
        """Window index at which each leg begins."""
        out, k = [], self.first_index
        for _, n in self.legs:
            out.append(k)
            k += n
        return tuple(out)

    @property
    def last_index(self) -> int:
        return self.first_index + sum(n for _, n in self.legs) - 1

    def leg_at(self, k: int) -> int:
        """Index of the leg governing window position k (endpoint legs
        extend beyond the window)."""
        starts = self.leg_starts
        if k < starts[0]:
            return 0
        for j in range(len(starts) - 1, -1, -1):
            if k >= starts[j]:
                return j
        raise AssertionError("unreachable")

    def orbit_point(self, k: int):
        """The pseudo-orbit point x_k, valid for every integer k."""
        j = self.leg_at(k)
        return point_shift(self.legs[j][0], k - self.leg_starts[j])

    def junction_errors(self) -> tuple:
        """e_j = d(f(last point of leg j), first point of leg j+1), exact."""
        errs = []
        for (s, n), (t, _) in zip(self.legs, self.legs[1:]):
            errs.append(point_dist(point_shift(s, n), t).value)
        return tuple(errs)

    def delta(self) -> Fraction:
        return max(self.junction_errors(), default=Fraction(0))

    def to_json(self) -> dict:
        return {
            "legs": [{"start": point_to_json(s), "length": n} for s, n in self.legs],
            "first_index": self.first_index,
        }

    @staticmethod
    def from_json(obj: dict, space: ShiftSpace) -> "PseudoOrbit":
        legs = tuple((point_from_json(l["start"]), int(l["length"])) for l in obj["legs"])
        return PseudoOrbit(space, legs, int(obj["first_index"]))


def _apply_descriptor(space: ShiftSpace, p, desc):
    kind = desc[0]
    if kind == "nudge":
        _, coord, amount = desc
        if space.kind != "cube":
            raise IllegalPerturbationError("coordinate nudges only apply on the cube")
        v = value_at(p, int(coord)) + Fraction(amount)
        if not 0 <= v <= 1:
            raise IllegalPerturbationError(f"nudged coordinate {coord} leaves [0,1]: {v}")
        return with_values(p, {int(coord): v})
    if kind == "set_symbols":
        _, updates = desc
        if space.kind not in ("full", "graph"):
            raise IllegalPerturbationError("symbol updates apply on full and graph shifts")
        try:
            out = with_values(p, {int(i): int(v) for i, v in updates.items()})
        except ValueError as exc:
            raise IllegalPerturbationError(str(exc))
        if space.kind == "graph" and not validate_walk(out, space.graph):
            raise IllegalPerturbationError("symbol update breaks the walk")
        return out
    if kind == "loop_switch":
        _, n_eps, i = desc
        if space.kind != "product":
            raise IllegalPerturbationError("loop switches apply on product shifts")
        try:
            return loop_switch_point(p, int(n_eps), int(i))
        except ValueError as exc:
            raise IllegalPerturbationError(str(exc))
    if kind == "replace":
        _, q = desc
        if not space.contains(q):
            raise IllegalPerturbationError("replacement point is outside the space")
        return q
    raise IllegalPerturbationError(f"unknown perturbation descriptor {kind!r}")


def perturb_orbit(space: ShiftSpace, x, jumps, tail: int = 4) -> PseudoOrbit:
    """Pseudo-orbit following the true orbit of x except at the given jumps.

    ``jumps`` is a list of (index, descriptor) with strictly increasing
    indices; at each index the arriving point is perturbed and a new true
    orbit leg begins, so delta(P) is exactly the largest displacement.
    """
    if not space.contains(x):
        raise ValueError("base point does not belong to the space")
    jumps = sorted(jumps, key=lambda t: t[0])
    if not jumps:
        return PseudoOrbit(space, ((x, 1),), first_index=0)
    if any(b[0] <= a[0] for a, b in zip(jumps, jumps[1:])):
        raise ValueError("jump indices must be strictly increasing")
    first_index = jumps[0][0] - max(tail, 1)
    legs = []
    cur, prev = point_shift(x, first_index), first_index
    for k, desc in jumps:
        legs.append((cur, k - prev))
        arrived = point_shift(cur, k - prev)
        cur, prev = _apply_descriptor(space, arrived, desc), k
    legs.append((cur, max(tail, 1)))
    return PseudoOrbit(space, tuple(legs), first_index)


# -- shadow construction -------------------------------------------------------


def _readout_seq(legs, starts, first_index: int) -> BiSeq:
    """Central-coordinate readout: value_at(z, k) = value_at(x_k, 0).

    Leg j contributes shift(start_j, -k_j) on its index range; the endpoint
    legs provide both periodic tails via the extension convention.
    """
    past = shift(legs[0][0], -starts[0])
    future = shift(legs[-1][0], -starts[-1])
    z = splice(past, future, cut=starts[-1])
    updates = {}
    for j in range(1, len(legs) - 1):
        s, n = legs[j]
        for k in range(starts[j], starts[j] + n):
            updates[k] = value_at(s, k - starts[j])
    return with_values(z, updates) if updates else z


def _repair_walk(z: BiSeq, legs, starts, g: LoopGraph, window: int) -> BiSeq:
    """Whole-loop repair of a graph readout, junction by junction.

    Each leg's own readout is a valid walk, so only junctions can break
    edges; every repair splices the accumulated past to the next leg's
    future through vertex 0, touching only coordinates near the junction.
    """
    if validate_walk(z, g):
        return z
    acc = shift(legs[0][0], -starts[0])
    for j in range(1, len(legs)):
        fut = shift(legs[j][0], -starts[j])
        cand = splice(acc, fut, cut=starts[j])
        if validate_walk(cand, g):
            acc = cand
            continue
        centered = splice_walks(shift(fut, starts[j]), shift(acc, starts[j]), g, window)
        if centered is None:
            raise ShadowRepairError(starts[j], "no whole-loop connector joins the legs")
        acc = shift(centered, -starts[j])
    return acc


def shadow_point(P: PseudoOrbit, eps: Fraction | None = None, window: int = 4):
    """True-orbit initial point whose k-th iterate reads off x_k centrally.

    Discrete spaces need delta(P) < 1/4 (junction agreement then makes the
    readout a valid walk); the cube needs delta(P) < eps/4 for a declared eps.
    """
    d = P.delta()
    if P.space.kind == "cube":
        if eps is None:
            raise PreconditionError("cube shadowing needs a declared eps")
        if d >= Fraction(eps) / 4:
            raise PreconditionError(f"delta(P) = {d} is not below eps/4")
    elif d >= Fraction(1, 4):
        raise PreconditionError(f"delta(P) = {d} is not below 1/4")
    starts = P.leg_starts
    if P.space.kind == "product":
        factors = []
        for n in range(1, P.space.n_factors + 1):
            flegs = tuple((s.factors[n - 1], ln) for s, ln in P.legs)
            zf = _readout_seq(flegs, starts, P.first_index)
            zf = _repair_walk(zf, flegs, starts, P.space.factor_graph(n), window)
            factors.append(zf)
        return ProductPoint(P.space.primes[: P.space.n_factors + 1], tuple(factors))
    z = _readout_seq(P.legs, starts, P.first_index)
    if P.space.kind == "graph":
        z = _repair_walk(z, P.legs, starts, P.space.graph, window)
    return z


# -- verification --------------------------------------------------------------


@dataclass(frozen=True)
class ShadowReport:
    candidate: object
    sup_dist: Fraction
    forward_tail_index: object  # int, agreement sentinel, or None
    backward_tail_index: object
    pass_eps: bool
    pass_limit: bool

    def to_json(self) -> dict:
        def enc(j):
            if j is None:
                return None
            return int(j) if isinstance(j, int) else "all"

        return {
            "candidate": point_to_json(self.candidate),
            "sup_dist": encode_fraction(self.sup_dist),
            "forward_tail_index": enc(self.forward_tail_index),
            "backward_tail_index": enc(self.backward_tail_index),
            "pass_eps": self.pass_eps,
            "pass_limit": self.pass_limit,
        }


def _tail_reach(j, eps: Fraction) -> int:
    """Window extension past which the 2^(J-k) certificate is below eps."""
    jj = 0 if not isinstance(j, int) else abs(j)
    return jj + log2_ceil(Fraction(2) / eps) + 1


def verify_shadowing(P: PseudoOrbit, z, eps: Fraction) -> ShadowReport:
    """Exact window distances d(f^k z, x_k) plus limit certificates.

    pass_eps: the sup over the window is <= eps and the explicitly checked
    extension (out to where the agreement-index bound takes over) is too.
    pass_limit: both agreement indices against the endpoint legs exist.
    """
    eps = Fraction(eps)
    starts = P.leg_starts
    u_first = point_shift(P.legs[0][0], -starts[0])
    u_last = point_shift(P.legs[-1][0], -starts[-1])
    jf = point_agreement(z, u_last, "forward")
    jb = point_agreement(z, u_first, "backward")
    pass_limit = jf is not None and jb is not None
    sup = Fraction(0)
    for j, (s, n) in enumerate(P.legs):
        u = point_shift(s, -starts[j])
        curve = distance_curve(z, u, range(starts[j], starts[j] + n))
        sup = max(sup, max(curve.values()))
    ok = sup <= eps
    if ok and pass_limit:
        hi = P.last_index + _tail_reach(jf, eps)
        fwd = distance_curve(z, u_last, range(P.last_index + 1, hi + 1))
        lo = P.first_index - _tail_reach(jb, eps)
        bwd = distance_curve(z, u_first, range(lo, P.first_index))
        ok = all(v <= eps for v in fwd.values()) and all(v <= eps for v in bwd.values())
    else:
        ok = False
    return ShadowReport(
        candidate=z,
        sup_dist=sup,
        forward_tail_index=jf,
        backward_tail_index=jb,
        pass_eps=ok,
        pass_limit=pass_limit,
    )


@dataclass(frozen=True)
class MembershipReport:
    """Two-sided asymptotic-set membership with per-rate deadline checks."""

    eps: Fraction
    horizon: int
    stable_ok: bool
    unstable_ok: bool
    checks: tuple  # of (r, k_r, ok)
    member: bool

    def to_json(self) -> dict:
        return {
            "eps": encode_fraction(self.eps),
            "horizon": self.horizon,
            "stable_ok": self.stable_ok,
            "unstable_ok": self.unstable_ok,
            "checks": [
                {"r": encode_fraction(r), "k_r": k, "ok": ok} for r, k, ok in self.checks
            ],
            "member": self.member,
        }


def rate_membership(z, x, y, eps: Fraction, k_family, horizon: int) -> MembershipReport:
    """Does z track x forward and y backward within eps, and within each r
    from its deadline k_r on?

    Distances are exact out to where the agreement-index certificate takes
    over, so every verdict covers all infinitely many iterates.
    """
    eps = Fraction(eps)
    k_family = [(Fraction(r), int(k)) for r, k in k_family]
    if any(k < 1 for _, k in k_family):
        raise ValueError("deadlines must be positive")
    if k_family and horizon < max(k for _, k in k_family):
        raise ValueError("horizon must cover every deadline")
    tight = min([eps] + [r for r, _ in k_family])
    jf = point_agreement(z, x, "forward")
    jb = point_agreement(z, y, "backward")
    if jf is None or jb is None:
        return MembershipReport(eps, horizon, jf is not None, jb is not None,
                                tuple((r, k, False) for r, k in k_family), False)
    hi_f = max(horizon, _tail_reach(jf, tight))
    hi_b = max(horizon, _tail_reach(jb, tight))
    fwd = distance_curve(z, x, range(0, hi_f + 1))
    bwd = distance_curve(z, y, range(-hi_b, 1))
    stable_ok = all(fwd[n] <= eps for n in range(hi_f + 1))
    unstable_ok = all(bwd[-n] <= eps for n in range(hi_b + 1))
    checks = []
    for r, k_r in k_family:
        ok = all(fwd[n] <= r for n in range(k_r, hi_f + 1)) and all(
            bwd[-n] <= r for n in range(k_r, hi_b + 1)
        )
        checks.append((r, k_r, ok))
    member = stable_ok and unstable_ok and all(ok for _, _, ok in checks)
    return MembershipReport(eps, horizon, stable_ok, unstable_ok, tuple(checks), member)


def estimate_contraction_deadline(
    space: ShiftSpace,
    eps: Fraction,
    delta: Fraction,
    r: Fraction,
    samples: int,
    horizon: int,
    seed: int,
    window: int = 4,
):
    """Least k <= horizon by which every sampled splice point has contracted
    below r on both sides, or None if the horizon is exhausted.

    Draws seeded close pairs, splices each, and takes the max over samples
    of the per-sample minimal deadline — order-independent, deterministic.
    """
    from .sampling import close_pair

    eps, delta, r = Fraction(eps), Fraction(delta), Fraction(r)
    if not 0 < r <= eps:
        raise PreconditionError(f"need 0 < r <= eps, got r={r}, eps={eps}")
    if samples < 1 or horizon < 1:
        raise PreconditionError("need at least one sample and a positive horizon")
    rng = Random(seed)
    worst = 1
    for _ in range(samples):
        x, y = close_pair(rng, space, delta, eps=eps)
        z = splice_point(space, x, y, eps=eps, window=window)
        jf = point_agreement(z, x, "forward")
        jb = point_agreement(z, y, "backward")
        if jf is None or jb is None:
            return None
        hi = max(horizon, _tail_reach(jf, r), _tail_reach(jb, r))
        fwd = distance_curve(z, x, range(0, hi + 1))
        bwd = distance_curve(z, y, range(-hi, 1))
        bad = 0
        for n in range(1, hi + 1):
            if fwd[n] > r or bwd[-n] > r:
                bad = n
        k_s = bad + 1
        if k_s > horizon:
            return None
        worst = max(worst, k_s)
    return worst
