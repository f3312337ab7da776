"""Shift-space descriptors and generic point operations.

Points are either BiSeq values (full shift, loop-graph subshift, cube
shift) or ProductPoint values (finite products of loop-graph subshifts).
The functions here dispatch on the point kind so hyperspace and shadowing
code can stay space-agnostic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .cubeshift import box_splice
from .graphshift import LoopGraph, ProductPoint, apply_F, product_metric, splice_walks, validate_walk
from .seqspace import (
    AGREE_ALL_BACKWARD,
    AGREE_ALL_FORWARD,
    BiSeq,
    ExactDist,
    SpaceMismatchError,
    ValueSpace,
    agreement_index,
    seq_metric,
    shift,
    splice,
    value_at,
)


class SpliceError(ValueError):
    """No connecting point could be constructed for a pair."""


@dataclass(frozen=True)
class ShiftSpace:
    """Which dynamical system a point lives in."""

    kind: str  # "full" | "graph" | "cube" | "product"
    alphabet: int | None = None
    p: int | None = None
    q: int | None = None
    primes: tuple | None = None
    n_factors: int | None = None

    def __post_init__(self):
        if self.kind == "full":
            if not self.alphabet or self.alphabet < 2:
                raise ValueError("full shift needs an alphabet of size >= 2")
        elif self.kind == "graph":
            LoopGraph(self.p, self.q)  # validates
        elif self.kind == "cube":
            pass
        elif self.kind == "product":
            if self.primes is None or not self.n_factors or self.n_factors < 1:
                raise ValueError("product space needs primes and n_factors >= 1")
            object.__setattr__(self, "primes", tuple(self.primes))
            if len(self.primes) < self.n_factors + 1:
                raise ValueError("need n_factors + 1 primes")
        else:
            raise ValueError(f"unknown space kind {self.kind!r}")

    @property
    def graph(self) -> LoopGraph:
        return LoopGraph(self.p, self.q)

    def value_space(self) -> ValueSpace:
        if self.kind == "full":
            return ValueSpace("discrete", self.alphabet)
        if self.kind == "graph":
            return self.graph.space
        if self.kind == "cube":
            return ValueSpace("unit")
        raise ValueError("product points have per-factor value spaces")

    def factor_graph(self, n: int) -> LoopGraph:
        return LoopGraph(self.primes[n - 1], self.primes[n])

    def contains(self, point) -> bool:
        if self.kind == "product":
            return (
                isinstance(point, ProductPoint)
                and point.primes == self.primes[: self.n_factors + 1]
                and point.n_factors == self.n_factors
            )
        if not isinstance(point, BiSeq) or point.space != self.value_space():
            return False
        if self.kind == "graph":
            return validate_walk(point, self.graph)
        return True

    def to_json(self) -> dict:
        if self.kind == "full":
            return {"kind": "full", "alphabet": self.alphabet}
        if self.kind == "graph":
            return {"kind": "graph", "p": self.p, "q": self.q}
        if self.kind == "cube":
            return {"kind": "cube"}
        return {"kind": "product", "primes": list(self.primes), "n_factors": self.n_factors}

    @staticmethod
    def from_json(obj: dict) -> "ShiftSpace":
        kind = obj["kind"]
        if kind == "full":
            return ShiftSpace("full", alphabet=int(obj["alphabet"]))
        if kind == "graph":
            return ShiftSpace("graph", p=int(obj["p"]), q=int(obj["q"]))
        if kind == "cube":
            return ShiftSpace("cube")
        return ShiftSpace(
            "product",
            primes=tuple(int(x) for x in obj["primes"]),
            n_factors=int(obj["n_factors"]),
        )


# -- generic point operations ------------------------------------------------


def point_shift(point, k: int):
    if isinstance(point, ProductPoint):
        return apply_F(point, k)
    return shift(point, k)


def point_dist(a, b) -> ExactDist:
    if isinstance(a, ProductPoint) or isinstance(b, ProductPoint):
        return product_metric(a, b)
    return seq_metric(a, b)


def point_agreement(a, b, side: str):
    """Agreement index lifted to product points (worst factor wins)."""
    if isinstance(a, ProductPoint):
        if not isinstance(b, ProductPoint) or a.primes != b.primes:
            raise SpaceMismatchError("product points have different shapes")
        best = AGREE_ALL_FORWARD if side == "forward" else AGREE_ALL_BACKWARD
        agg = max if side == "forward" else min
        out = best
        for fa, fb in zip(a.factors, b.factors):
            j = agreement_index(fa, fb, side)
            if j is None:
                return None
            out = agg(out, j)
        return out
    return agreement_index(a, b, side)


def point_to_json(point) -> dict:
    return point.to_json()


def point_from_json(obj: dict):
    if "primes" in obj:
        return ProductPoint.from_json(obj)
    return BiSeq.from_json(obj)


# -- exact distance curves ----------------------------------------------------


def _seq_curve(u: BiSeq, v: BiSeq, ks) -> dict:
    """d(sigma^k u, sigma^k v) for every k in ks, exactly.

    One pass over a central window covering all shifts plus closed-form
    geometric sums for both periodic tails.
    """
    if u.space != v.space:
        raise SpaceMismatchError("curve endpoints live in different spaces")
    ks = list(ks)
    dist = u.space.coord_dist
    a = min(min(ks), 0, u.core_start, v.core_start)
    b = max(max(ks) + 1, 0, u.core_end, v.core_end)
    mism = {}
    for i in range(a, b):
        t = dist(value_at(u, i), value_at(v, i))
        if t:
            mism[i] = t
    ml = lcm(len(u.left), len(v.left))
    mr = lcm(len(u.right), len(v.right))
    # left tail: i < a <= every k, weight 2^(i-k) -> 2^-k * s_left
    s_left = Fraction(0)
    lfac = Fraction(1) / (1 - Fraction(1, 2**ml))
    for i in range(a - ml, a):
        t = dist(value_at(u, i), value_at(v, i))
        if t:
            s_left += t * Fraction(2) ** i * lfac
    # right tail: i >= b > every k, weight 2^(k-i) -> 2^k * s_right
    s_right = Fraction(0)
    rfac = Fraction(1) / (1 - Fraction(1, 2**mr))
    for i in range(b, b + mr):
        t = dist(value_at(u, i), value_at(v, i))
        if t:
            s_right += t * Fraction(2) ** (-i) * rfac
    out = {}
    for k in ks:
        total = s_left * Fraction(2) ** (-k) + s_right * Fraction(2) ** k
        for i, t in mism.items():
            total += t * Fraction(1, 2 ** abs(i - k))
        out[k] = total
    return out


def distance_curve(u, v, ks) -> dict:
    """Exact map k -> d(f^k u, f^k v) for finitely many iterates k."""
    if isinstance(u, ProductPoint):
        if not isinstance(v, ProductPoint) or u.primes != v.primes:
            raise SpaceMismatchError("product points have different shapes")
        ks = sorted(set(ks))
        out = {k: Fraction(0) for k in ks}
        for n, (fu, fv) in enumerate(zip(u.factors, v.factors), start=1):
            sub = _seq_curve(fu, fv, ks)
            w = Fraction(1, 2**n)
            for k in ks:
                out[k] += sub[k] * w
        return out
    return _seq_curve(u, v, ks)


def log2_ceil(x: Fraction) -> int:
    """Least c >= 0 with 2^c >= x."""
    c = 0
    pw = Fraction(1)
    while pw < x:
        pw *= 2
        c += 1
    return c


def tail_certificate_bound(j, k: int, side: str) -> Fraction:
    """Rigorous bound on d(f^k u, f^k v) from an agreement index j.

    Forward: coordinates agree on i >= j, so the distance at iterate k >= j
    is at most sum_{i<j} 2^(i-k) = 2^(j-k); backward mirrors this.
    """
    if j is None:
        raise ValueError("no tail certificate available")
    if side == "forward":
        if j == AGREE_ALL_FORWARD:
            return Fraction(0)
        return Fraction(2) ** (int(j) - k)
    if j == AGREE_ALL_BACKWARD:
        return Fraction(0)
    return Fraction(2) ** (k - int(j))


def splice_point(space: ShiftSpace, x, y, eps=None, window: int = 4):
    """Point joining the past of y to the future of x in the given space.

    Cube: the box splice (verified coordinate-wise).  Full shift: the raw
    splice at index 0.  Graph and product: whole-loop connector search.
    """
    if space.kind == "cube":
        if eps is None:
            raise ValueError("cube splices need a box radius")
        return box_splice(x, y, eps)
    if space.kind == "full":
        return splice(y, x, cut=0)
    if space.kind == "graph":
        out = splice_walks(x, y, space.graph, window)
        if out is None:
            raise SpliceError("no whole-loop connector found within the window")
        return out
    factors = []
    for n, (fx, fy) in enumerate(zip(x.factors, y.factors), start=1):
        g = space.factor_graph(n)
        out = splice_walks(fx, fy, g, window)
        if out is None:
            raise SpliceError(f"no whole-loop connector found in factor {n}")
        factors.append(out)
    return ProductPoint(x.primes, tuple(factors))
