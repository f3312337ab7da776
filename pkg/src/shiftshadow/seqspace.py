"""Bi-infinite eventually-periodic sequences with exact dyadic metrics.

A sequence is stored as a finite core flanked by two periodic tails.  The
left tail word tiles leftward so that its last symbol sits at
``core_start - 1``; the right tail word tiles rightward starting at
``core_start + len(core)``.  All arithmetic is done with ``fractions.Fraction``
so every metric value is an exact rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Union

Value = Union[int, Fraction]

#: Sentinels returned by agreement_index when the sequences agree on the
#: whole line ("all").
AGREE_ALL_FORWARD = -math.inf
AGREE_ALL_BACKWARD = math.inf


class SpaceMismatchError(ValueError):
    """Operands live over different value spaces."""


@dataclass(frozen=True)
class ValueSpace:
    """Per-coordinate value space: a finite alphabet or rationals in [0,1]."""

    kind: str  # "discrete" | "unit"
    size: int | None = None

    def __post_init__(self):
        if self.kind == "discrete":
            if not isinstance(self.size, int) or self.size < 1:
                raise ValueError("discrete space needs a positive alphabet size")
        elif self.kind == "unit":
            if self.size is not None:
                raise ValueError("unit-interval space has no alphabet size")
        else:
            raise ValueError(f"unknown value-space kind {self.kind!r}")

    def check(self, v: Value) -> Value:
        if self.kind == "discrete":
            if not isinstance(v, int) or not (0 <= v < self.size):
                raise ValueError(f"{v!r} is not a symbol of a {self.size}-letter alphabet")
            return v
        v = Fraction(v)
        if not (0 <= v <= 1):
            raise ValueError(f"{v} is outside [0, 1]")
        return v

    def coord_dist(self, a: Value, b: Value) -> Fraction:
        """Per-coordinate distance: discrete 0/1 metric or |a - b|."""
        if self.kind == "discrete":
            return Fraction(0) if a == b else Fraction(1)
        return abs(Fraction(a) - Fraction(b))

    def to_json(self) -> dict:
        if self.kind == "discrete":
            return {"kind": "discrete", "size": self.size}
        return {"kind": "unit"}

    @staticmethod
    def from_json(obj: dict) -> "ValueSpace":
        if obj["kind"] == "discrete":
            return ValueSpace("discrete", int(obj["size"]))
        return ValueSpace("unit")


DISCRETE2 = ValueSpace("discrete", 2)
UNIT = ValueSpace("unit")


@dataclass(frozen=True)
class ExactDist:
    """An exact rational distance, optionally with a rigorous error bound.

    The true distance lies in [value - tail_bound, value + tail_bound].
    All single-space metrics in this package are exact (tail_bound == 0).
    """

    value: Fraction
    tail_bound: Fraction = Fraction(0)

    def __post_init__(self):
        if self.value < 0 or self.tail_bound < 0:
            raise ValueError("distance and bound must be nonnegative")


def encode_value(v: Value) -> int | str:
    if isinstance(v, int):
        return v
    return f"{v.numerator}/{v.denominator}"


def decode_value(space: ValueSpace, v) -> Value:
    if space.kind == "discrete":
        return int(v)
    if isinstance(v, str):
        return Fraction(v)
    return Fraction(v)


def encode_fraction(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True, eq=False)
class BiSeq:
    """Eventually-periodic function Z -> ValueSpace.

    value(i) = core[i - core_start]                     core region
             = right[(i - core_end) % len(right)]       i >= core_end
             = left[(i - core_start) % len(left)]       i < core_start
    """

    space: ValueSpace
    left: tuple
    core: tuple
    right: tuple
    core_start: int = 0
    _canon: "BiSeq | None" = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not self.left or not self.right:
            raise ValueError("periodic tails must be nonempty")
        object.__setattr__(self, "left", tuple(self.space.check(v) for v in self.left))
        object.__setattr__(self, "core", tuple(self.space.check(v) for v in self.core))
        object.__setattr__(self, "right", tuple(self.space.check(v) for v in self.right))

    @property
    def core_end(self) -> int:
        return self.core_start + len(self.core)

    def __getitem__(self, i: int) -> Value:
        return value_at(self, i)

    def __eq__(self, other):
        if not isinstance(other, BiSeq):
            return NotImplemented
        a, b = canonical(self), canonical(other)
        return (a.space, a.left, a.core, a.right, a.core_start) == (
            b.space,
            b.left,
            b.core,
            b.right,
            b.core_start,
        )

    def __hash__(self):
        c = canonical(self)
        return hash((c.space, c.left, c.core, c.right, c.core_start))

    # -- serialization -------------------------------------------------

    def to_json(self) -> dict:
        return {
            "left": [encode_value(v) for v in self.left],
            "core": [encode_value(v) for v in self.core],
            "right": [encode_value(v) for v in self.right],
            "core_start": self.core_start,
            "space": self.space.to_json(),
        }

    @staticmethod
    def from_json(obj: dict) -> "BiSeq":
        space = ValueSpace.from_json(obj["space"])
        return BiSeq(
            space,
            tuple(decode_value(space, v) for v in obj["left"]),
            tuple(decode_value(space, v) for v in obj["core"]),
            tuple(decode_value(space, v) for v in obj["right"]),
            int(obj["core_start"]),
        )


def constant_seq(space: ValueSpace, v: Value) -> BiSeq:
    return BiSeq(space, (v,), (), (v,), 0)


def periodic_seq(space: ValueSpace, word, anchor: int = 0) -> BiSeq:
    """Fully periodic sequence: value(anchor + j) = word[j % len(word)]."""
    word = tuple(word)
    # re-anchor at 0 so value(i) = w0[i % L]
    L = len(word)
    w0 = tuple(word[(i - anchor) % L] for i in range(L))
    return BiSeq(space, w0, (), w0, 0)


def value_at(s: BiSeq, i: int) -> Value:
    if i >= s.core_end:
        return s.right[(i - s.core_end) % len(s.right)]
    if i >= s.core_start:
        return s.core[i - s.core_start]
    return s.left[(i - s.core_start) % len(s.left)]


def shift(s: BiSeq, k: int) -> BiSeq:
    """Shift map power: value_at(shift(s, k), i) == value_at(s, i + k)."""
    if k == 0:
        return s
    return BiSeq(s.space, s.left, s.core, s.right, s.core_start - k)


def _primitive(word: tuple) -> tuple:
    """Shortest word whose tiling equals the tiling of ``word``."""
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and all(word[j] == word[j % p] for j in range(n)):
            return word[:p]
    return word


def canonical(s: BiSeq) -> BiSeq:
    """Unique minimal-period, minimal-core representative of the same function."""
    if s._canon is not None:
        return s._canon
    left = _primitive(s.left)
    right = _primitive(s.right)
    ll, lr = len(left), len(right)
    cs, ce = s.core_start, s.core_end
    big = lcm(ll, lr)

    def leftval(i: int) -> Value:
        return left[(i - cs) % ll]

    def rightval(i: int) -> Value:
        return right[(i - ce) % lr]

    if all(value_at(s, i) == rightval(i) for i in range(cs - big, ce)):
        # globally periodic: anchor the primitive pattern at index 0
        pat = _primitive(tuple(rightval(j) for j in range(lr)))
        result = BiSeq(s.space, pat, (), pat, 0)
    else:
        br = ce
        while value_at(s, br - 1) == rightval(br - 1):
            br -= 1
        bl = cs
        while value_at(s, bl) == leftval(bl):
            bl += 1
        if bl >= br:
            b, core = br, ()
        else:
            b, core = bl, tuple(value_at(s, i) for i in range(bl, br))
        new_left = tuple(leftval(b - ll + j) for j in range(ll))
        new_right = tuple(rightval(b + len(core) + j) for j in range(lr))
        result = BiSeq(s.space, new_left, core, new_right, b)
    object.__setattr__(result, "_canon", result)
    object.__setattr__(s, "_canon", result)
    return result


def _check_same_space(x: BiSeq, y: BiSeq):
    if x.space != y.space:
        raise SpaceMismatchError(f"value spaces differ: {x.space} vs {y.space}")


def seq_metric(x: BiSeq, y: BiSeq, _pad: int = 0) -> ExactDist:
    """Exact weighted distance sum_i coord_dist(x_i, y_i) / 2^|i|.

    The infinite sum is split into a finite central window plus two
    geometric series over the periodic tails, so the result is an exact
    rational with tail_bound 0.  ``_pad`` widens the central window; it
    never changes the value and exists so tests can cross-check two
    independent evaluation orders.
    """
    _check_same_space(x, y)
    dist = x.space.coord_dist
    ll = lcm(len(x.left), len(y.left))
    lr = lcm(len(x.right), len(y.right))
    a = min(0, x.core_start, y.core_start) - _pad
    b = max(0, x.core_end, y.core_end) + _pad

    total = Fraction(0)
    for i in range(a, b):
        total += dist(value_at(x, i), value_at(y, i)) * Fraction(1, 2 ** abs(i))
    # left tail: i < a <= 0, weight 2^i, each residue class is geometric
    lfac = Fraction(1) / (1 - Fraction(1, 2**ll))
    for i in range(a - ll, a):
        t = dist(value_at(x, i), value_at(y, i))
        if t:
            total += t * Fraction(2) ** i * lfac
    # right tail: i >= b >= 0, weight 2^-i
    rfac = Fraction(1) / (1 - Fraction(1, 2**lr))
    for i in range(b, b + lr):
        t = dist(value_at(x, i), value_at(y, i))
        if t:
            total += t * Fraction(2) ** (-i) * rfac
    return ExactDist(total)


def agreement_index(x: BiSeq, y: BiSeq, side: str = "forward"):
    """Least J with x_i == y_i for all i >= J (forward), or the greatest J
    with agreement for all i <= J (backward).

    Returns ``None`` when the relevant periodic tails disagree, and the
    infinite sentinel (AGREE_ALL_FORWARD / AGREE_ALL_BACKWARD) when the
    sequences agree everywhere.
    """
    _check_same_space(x, y)
    if side not in ("forward", "backward"):
        raise ValueError(f"side must be 'forward' or 'backward', got {side!r}")
    a = min(0, x.core_start, y.core_start)
    b = max(0, x.core_end, y.core_end)
    ml = lcm(len(x.left), len(y.left))
    mr = lcm(len(x.right), len(y.right))
    if side == "forward":
        if any(value_at(x, i) != value_at(y, i) for i in range(b, b + mr)):
            return None
        for i in range(b - 1, a - ml - 1, -1):
            if value_at(x, i) != value_at(y, i):
                return i + 1
        return AGREE_ALL_FORWARD
    if any(value_at(x, i) != value_at(y, i) for i in range(a - ml, a)):
        return None
    for i in range(a, b + mr):
        if value_at(x, i) != value_at(y, i):
            return i - 1
    return AGREE_ALL_BACKWARD


def left_word_at(s: BiSeq, a: int) -> tuple:
    """Word w with value_at(s, i) == w[(i - a) % len(w)] for every i < a.

    Requires a <= s.core_start so the region is purely periodic.
    """
    if a > s.core_start:
        raise ValueError("anchor lies inside or right of the core")
    ll = len(s.left)
    return tuple(value_at(s, a - ll + j) for j in range(ll))


def right_word_at(s: BiSeq, b: int) -> tuple:
    """Word w with value_at(s, i) == w[(i - b) % len(w)] for every i >= b."""
    if b < s.core_end:
        raise ValueError("anchor lies inside or left of the core")
    lr = len(s.right)
    return tuple(value_at(s, b + j) for j in range(lr))


def splice(past: BiSeq, future: BiSeq, cut: int = 0) -> BiSeq:
    """Point that copies ``past`` on i < cut and ``future`` on i >= cut."""
    _check_same_space(past, future)
    a = min(cut, past.core_start)
    b = max(cut, future.core_end)
    core = tuple(value_at(past, i) for i in range(a, cut)) + tuple(
        value_at(future, i) for i in range(cut, b)
    )
    return canonical(BiSeq(past.space, left_word_at(past, a), core, right_word_at(future, b), a))


def with_values(s: BiSeq, updates: dict) -> BiSeq:
    """Copy of ``s`` with finitely many coordinates overridden."""
    if not updates:
        return s
    a = min(min(updates), s.core_start, 0)
    b = max(max(updates) + 1, s.core_end, 0)
    core = tuple(updates.get(i, value_at(s, i)) for i in range(a, b))
    return canonical(BiSeq(s.space, left_word_at(s, a), core, right_word_at(s, b), a))
