"""Two-loop graph subshifts, their finite products, and loop-switch points.

The graph on p + q - 1 vertices has a loop of length p through vertices
0, 1, ..., p-1 and a loop of length q through 0, p, p+1, ..., p+q-2 (p and
q relatively prime).  Points are bi-infinite vertex walks; products of
these subshifts carry the weighted metric sum_n d_n(x_n, y_n) / 2^n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .seqspace import (
    BiSeq,
    ExactDist,
    SpaceMismatchError,
    ValueSpace,
    canonical,
    left_word_at,
    periodic_seq,
    right_word_at,
    seq_metric,
    shift,
    value_at,
)


class WalkError(ValueError):
    """A sequence is not a walk on the loop graph."""


@dataclass(frozen=True)
class LoopGraph:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 1 or self.q < 1 or math.gcd(self.p, self.q) != 1:
            raise ValueError("loop lengths must be positive and relatively prime")

    @property
    def alphabet_size(self) -> int:
        return self.p + self.q - 1

    @property
    def space(self) -> ValueSpace:
        return ValueSpace("discrete", self.alphabet_size)

    @property
    def p_loop(self) -> tuple:
        return tuple(range(self.p))

    @property
    def q_loop(self) -> tuple:
        return (0,) + tuple(range(self.p, self.p + self.q - 1))

    @property
    def edges(self) -> frozenset:
        pairs = set()
        for word in (self.p_loop, self.q_loop):
            for j, v in enumerate(word):
                pairs.add((v, word[(j + 1) % len(word)]))
        return frozenset(pairs)


def validate_walk(s: BiSeq, g: LoopGraph) -> bool:
    """True iff every adjacent pair of ``s`` is an edge of ``g``.

    Decided by scanning the core plus one period block of each tail.
    """
    if s.space != g.space:
        raise SpaceMismatchError(f"sequence alphabet {s.space} does not match graph {g.space}")
    edges = g.edges
    lo = s.core_start - len(s.left) - 1
    hi = s.core_end + len(s.right)
    return all((value_at(s, i), value_at(s, i + 1)) in edges for i in range(lo, hi))


@dataclass(frozen=True, eq=False)
class ProductPoint:
    """Point of a finite product of loop-graph subshifts.

    ``primes`` lists N+1 strictly increasing primes; factor n (1-based) is a
    walk on LoopGraph(primes[n-1], primes[n]).  Factors beyond N are deemed
    equal in both arguments of any metric call, so the truncated metric is
    exact.
    """

    primes: tuple
    factors: tuple

    def __post_init__(self):
        primes = tuple(self.primes)
        factors = tuple(self.factors)
        object.__setattr__(self, "primes", primes)
        object.__setattr__(self, "factors", factors)
        if len(factors) < 1 or len(primes) != len(factors) + 1:
            raise ValueError("need N >= 1 factors and N+1 primes")
        if any(primes[i] >= primes[i + 1] for i in range(len(primes) - 1)):
            raise ValueError("primes must be strictly increasing")
        for n, f in enumerate(factors, start=1):
            g = LoopGraph(primes[n - 1], primes[n])
            if not validate_walk(f, g):
                raise WalkError(f"factor {n} is not a walk on the ({g.p},{g.q}) loop graph")

    @property
    def n_factors(self) -> int:
        return len(self.factors)

    def graph(self, n: int) -> LoopGraph:
        return LoopGraph(self.primes[n - 1], self.primes[n])

    def __eq__(self, other):
        if not isinstance(other, ProductPoint):
            return NotImplemented
        return self.primes == other.primes and self.factors == other.factors

    def __hash__(self):
        return hash((self.primes, tuple(hash(f) for f in self.factors)))

    def to_json(self) -> dict:
        return {"primes": list(self.primes), "factors": [f.to_json() for f in self.factors]}

    @staticmethod
    def from_json(obj: dict) -> "ProductPoint":
        return ProductPoint(
            tuple(int(p) for p in obj["primes"]),
            tuple(BiSeq.from_json(f) for f in obj["factors"]),
        )


def base_point(primes, n_factors: int) -> ProductPoint:
    """Every factor runs its short loop forever, anchored at vertex 0 at index 0."""
    primes = tuple(primes)
    if n_factors < 1 or len(primes) < n_factors + 1:
        raise ValueError("need at least n_factors + 1 primes")
    primes = primes[: n_factors + 1]
    factors = []
    for n in range(1, n_factors + 1):
        g = LoopGraph(primes[n - 1], primes[n])
        factors.append(periodic_seq(g.space, g.p_loop))
    return ProductPoint(primes, tuple(factors))


def product_metric(a: ProductPoint, b: ProductPoint) -> ExactDist:
    """Exact rational value of sum_n d_n(a_n, b_n) / 2^n."""
    if a.primes != b.primes or a.n_factors != b.n_factors:
        raise SpaceMismatchError("product points have different shapes")
    total = Fraction(0)
    for n, (fa, fb) in enumerate(zip(a.factors, b.factors), start=1):
        total += seq_metric(fa, fb).value * Fraction(1, 2**n)
    return ExactDist(total)


def apply_F(a: ProductPoint, k: int) -> ProductPoint:
    """k-th power of the product shift: every factor shifted by k."""
    if k == 0:
        return a
    return ProductPoint(a.primes, tuple(shift(f, k) for f in a.factors))


def loop_switch_factor(g: LoopGraph, i: int) -> BiSeq:
    """Walk that runs i short loops past index 0, detours through p long
    loops, and rejoins the short-loop pattern from index i*p + p*q on."""
    p, q = g.p, g.q
    if i < 1:
        raise ValueError("need at least one leading short loop")
    start = i * p + 1
    core = tuple(g.q_loop[t % q] for t in range(1, p * q))
    left = tuple((j + start) % p for j in range(p))
    right = tuple((j + i * p + p * q) % p for j in range(p))
    return canonical(BiSeq(g.space, left, core, right, start))


def loop_switch_point(x: ProductPoint, n_eps: int, i: int) -> ProductPoint:
    """Copy of the base point ``x`` whose factor ``n_eps`` takes the i-th
    loop-switch detour; all other factors are untouched."""
    if not (1 <= n_eps <= x.n_factors):
        raise ValueError(f"factor index {n_eps} out of range 1..{x.n_factors}")
    g = x.graph(n_eps)
    if x.factors[n_eps - 1] != periodic_seq(g.space, g.p_loop):
        raise ValueError("loop switches are defined relative to the base point")
    factors = list(x.factors)
    factors[n_eps - 1] = loop_switch_factor(g, i)
    return ProductPoint(x.primes, tuple(factors))


def loop_switch_displacement(x: ProductPoint, z_i: ProductPoint, n_eps: int, i: int) -> ExactDist:
    """Exact distance between the i*p-th iterates of ``x`` and its switch point.

    Every mismatch indicator on the detour is recomputed from coordinates,
    never assumed to be 1.
    """
    if x.primes != z_i.primes:
        raise SpaceMismatchError("product points have different shapes")
    for n in range(1, x.n_factors + 1):
        if n != n_eps and x.factors[n - 1] != z_i.factors[n - 1]:
            raise ValueError(f"factor {n} differs but only factor {n_eps} may")
    p = x.primes[n_eps - 1]
    return product_metric(apply_F(x, i * p), apply_F(z_i, i * p))


def _representable(length: int, p: int, q: int):
    """Nonnegative (s, t) with s*p + t*q == length, or None."""
    for t in range(length // q + 1):
        rem = length - t * q
        if rem % p == 0:
            return rem // p, t
    return None


def splice_walks(x_future: BiSeq, y_past: BiSeq, g: LoopGraph, window: int = 0):
    """Valid walk agreeing with ``y_past`` far in the past and with
    ``x_future`` far in the future, joined with whole loops through vertex 0.

    Returns None when no vertex-0 occurrence is found within
    ``window + p*q`` steps on either side of index 0.
    """
    if not validate_walk(x_future, g) or not validate_walk(y_past, g):
        raise WalkError("both inputs must be valid walks")
    if x_future == y_past:
        return x_future
    p, q = g.p, g.q
    reach = window + p * q
    past_zeros = [i for i in range(0, -reach - 1, -1) if value_at(y_past, i) == 0]
    future_zeros = [i for i in range(0, reach + 1) if value_at(x_future, i) == 0]
    if not past_zeros or not future_zeros:
        return None
    candidates = sorted(
        ((b - a, b, a) for a in past_zeros for b in future_zeros),
        key=lambda t: (t[0], t[1]),
    )
    for length, b, a in candidates:
        rep = _representable(length, p, q)
        if rep is None:
            continue
        s, t = rep
        connector = (g.p_loop * s) + (g.q_loop * t)
        lo = min(a, y_past.core_start)
        hi = max(b, x_future.core_end)
        core = (
            tuple(value_at(y_past, i) for i in range(lo, a))
            + connector
            + tuple(value_at(x_future, i) for i in range(b, hi))
        )
        out = canonical(BiSeq(g.space, left_word_at(y_past, lo), core, right_word_at(x_future, hi), lo))
        if not validate_walk(out, g):  # loops always join at vertex 0
            raise WalkError("internal error: spliced sequence is not a walk")
        return out
    return None
