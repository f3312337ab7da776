"""Seeded generators for points, close pairs, finite sets, and pseudo-orbit
perturbations.

Uniform sampling over a compact shift space is ill-defined, so every
generator draws eventually-periodic points with bounded core and period
budgets, and builds partners by copy-plus-bounded-perturbation so that the
required distance bounds hold by construction (and exactly).
"""

from __future__ import annotations

from fractions import Fraction
from random import Random

from .graphshift import LoopGraph, ProductPoint, base_point, loop_switch_point
from .seqspace import BiSeq, UNIT, ValueSpace, canonical, seq_metric, value_at, with_values
from .spaces import ShiftSpace, log2_ceil, point_dist


def _rand_fraction(rng: Random, denom: int = 64) -> Fraction:
    return Fraction(rng.randrange(denom + 1), denom)


def random_unit_point(rng: Random, span: int = 3, denom: int = 64) -> BiSeq:
    """Eventually-periodic point of the unit-interval shift."""
    left = tuple(_rand_fraction(rng, denom) for _ in range(rng.randint(1, span)))
    core = tuple(_rand_fraction(rng, denom) for _ in range(rng.randint(0, span)))
    right = tuple(_rand_fraction(rng, denom) for _ in range(rng.randint(1, span)))
    return canonical(BiSeq(UNIT, left, core, right, rng.randint(-span, span)))


def random_discrete_point(rng: Random, alphabet: int, span: int = 4) -> BiSeq:
    space = ValueSpace("discrete", alphabet)
    sym = lambda: rng.randrange(alphabet)
    left = tuple(sym() for _ in range(rng.randint(1, span)))
    core = tuple(sym() for _ in range(rng.randint(0, span)))
    right = tuple(sym() for _ in range(rng.randint(1, span)))
    return canonical(BiSeq(space, left, core, right, rng.randint(-span, span)))


def random_walk(rng: Random, g: LoopGraph, loops: int = 4) -> BiSeq:
    """Random concatenation of whole loops, short-loop tails on both sides.

    Whole loops start and end adjacent to vertex 0, so any concatenation is
    a valid walk; anchoring the core at a multiple of p keeps the left tail
    consistent.
    """
    word = ()
    for _ in range(rng.randint(1, loops)):
        word += g.p_loop if rng.random() < 0.5 else g.q_loop
    anchor = -g.p * rng.randint(0, 2)
    left = tuple((j + anchor) % g.p for j in range(g.p))
    right = tuple(j % g.p for j in range(g.p))
    return canonical(BiSeq(g.space, left, word, right, anchor))


def random_point(rng: Random, space: ShiftSpace):
    if space.kind == "cube":
        return random_unit_point(rng)
    if space.kind == "full":
        return random_discrete_point(rng, space.alphabet)
    if space.kind == "graph":
        return random_walk(rng, space.graph)
    factors = tuple(random_walk(rng, space.factor_graph(n)) for n in range(1, space.n_factors + 1))
    return ProductPoint(space.primes[: space.n_factors + 1], factors)


def _nudge_into_range(x: Fraction, amount: Fraction) -> Fraction:
    v = x + amount
    if v > 1:
        v = x - amount
    if v < 0:
        v = x + amount / 2  # amount <= 1 keeps this in range when x is interior
    return min(max(v, Fraction(0)), Fraction(1))


def cube_close_pair(rng: Random, eps: Fraction, delta: Fraction, span: int = 4):
    """(x, y) in the cube shift with d(x, y) < delta and every coordinate
    difference <= eps — the pair is then box-splicable whenever delta <= eps/4."""
    eps, delta = Fraction(eps), Fraction(delta)
    x = random_unit_point(rng, span=span)
    budget = delta * Fraction(3, 4)
    spent = Fraction(0)
    updates = {}
    for i in rng.sample(range(-span, span + 1), rng.randint(1, 3)):
        w = Fraction(1, 2 ** abs(i))
        cap = min(eps, (budget - spent) / w)
        if cap <= 0:
            continue
        amount = min(cap, _rand_fraction(rng, 64) * cap)
        xi = value_at(x, i)
        v = _nudge_into_range(xi, amount)
        if v == xi:
            continue
        updates[i] = v
        spent += abs(v - xi) * w
    y = with_values(x, updates) if updates else x
    assert seq_metric(x, y).value < delta
    return x, y


def full_shift_close_pair(rng: Random, alphabet: int, delta: Fraction, width: int = 5):
    """(x, y) in the full shift with 0 < d(x, y) < delta, forced by flipping
    symbols only at offsets |i| >= o where the whole tail weighs < delta."""
    delta = Fraction(delta)
    x = random_discrete_point(rng, alphabet)
    o = log2_ceil(Fraction(4) / delta)
    side = rng.choice((1, -1))
    updates = {}
    for j in rng.sample(range(width), rng.randint(1, width)):
        i = side * (o + j)
        cur = value_at(x, i)
        updates[i] = (cur + rng.randrange(1, alphabet)) % alphabet
    y = with_values(x, updates)
    # finitely many flips beyond o sum strictly below the full 2^(2-o) tail
    assert 0 < seq_metric(x, y).value < delta
    return x, y


def product_close_pair(rng: Random, space: ShiftSpace, delta: Fraction):
    """(x, y) in the product shift with 0 < d(x, y) < delta, built from a far
    loop-switch in one factor of the common base point."""
    delta = Fraction(delta)
    x = base_point(space.primes, space.n_factors)
    n = rng.randint(1, space.n_factors)
    p = space.primes[n - 1]
    i = max(1, (log2_ceil(Fraction(2) / delta) + p) // p)
    while True:
        y = loop_switch_point(x, n, i)
        d = point_dist(x, y).value
        if 0 < d < delta:
            return x, y
        i += 1


def close_pair(rng: Random, space: ShiftSpace, delta: Fraction, eps: Fraction | None = None):
    if space.kind == "cube":
        if eps is None:
            raise ValueError("cube pairs need eps to cap coordinate differences")
        return cube_close_pair(rng, eps, delta)
    if space.kind == "full":
        return full_shift_close_pair(rng, space.alphabet, delta)
    if space.kind == "graph":
        # a one-factor product weights its factor by 1/2
        prod = ShiftSpace("product", primes=(space.p, space.q), n_factors=1)
        x, y = product_close_pair(rng, prod, Fraction(delta) / 2)
        return x.factors[0], y.factors[0]
    return product_close_pair(rng, space, delta)


def cube_set_pair(rng: Random, eps: Fraction, delta: Fraction, max_size: int = 6):
    """(A, B) in the cube with d_H(A, B) < delta and every cross-coordinate
    difference <= eps, so every close pair admits a box splice.

    All points perturb one shared center by at most eps/2 per coordinate;
    each B point tracks one A point within 3*delta/4.
    """
    from .hyperspace import FiniteCompact

    eps, delta = Fraction(eps), Fraction(delta)
    center = random_unit_point(rng, span=2)
    size = rng.randint(1, max_size)
    half = eps / 2

    def scatter(base, cap, positions):
        updates = {}
        for i in positions:
            w = Fraction(1, 2 ** abs(i))
            amount = min(half, cap / w / 2) * _rand_fraction(rng, 32)
            v = _nudge_into_range(value_at(base, i), amount)
            updates[i] = v
        return with_values(base, updates) if updates else base

    a_points, b_points = [], []
    for _ in range(size):
        pos = rng.sample(range(-3, 4), rng.randint(1, 3))
        a = scatter(center, Fraction(1, 2), pos)  # spread within the eps/2 band
        b = scatter(a, delta * Fraction(3, 4), rng.sample(range(-3, 4), rng.randint(1, 2)))
        assert seq_metric(a, b).value < delta
        a_points.append(a)
        b_points.append(b)
    space = ShiftSpace("cube")
    return FiniteCompact(space, tuple(a_points)), FiniteCompact(space, tuple(b_points))


def single_jump(rng: Random, space: ShiftSpace, eps: Fraction):
    """(base point, jump list) for perturb_orbit: one jump whose junction
    error is strictly below eps/4."""
    eps = Fraction(eps)
    x = random_point(rng, space)
    k = rng.randint(-5, 5)
    if space.kind == "cube":
        coord = rng.randint(-2, 2)
        cap = min(eps / 5, Fraction(1, 8))
        amount = cap * Fraction(rng.randrange(1, 33), 32)
        # the nudge applies at orbit index k, i.e. to coordinate coord + k of x
        if value_at(x, coord + k) + amount > 1:
            amount = -amount
        return x, [(k, ("nudge", coord, amount))]
    if space.kind == "full":
        o = log2_ceil(Fraction(8) / eps)
        coord = rng.choice((1, -1)) * (o + rng.randint(0, 3))
        cur = value_at(x, coord)
        sym = (cur + rng.randrange(1, space.alphabet)) % space.alphabet
        return x, [(k, ("set_symbols", {coord: sym}))]
    raise ValueError("single-jump sampling covers the full shift and the cube")
