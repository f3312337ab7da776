"""The shift on [0,1]^Z: one-sided boxes, exact diameters, contraction
times, box splices, and the slow-coordinate witness that defeats any
uniform contraction schedule."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .seqspace import (
    AGREE_ALL_BACKWARD,
    AGREE_ALL_FORWARD,
    BiSeq,
    agreement_index,
    encode_fraction,
    seq_metric,
    shift,
    splice,
    value_at,
    with_values,
)


class PreconditionError(ValueError):
    """A quantitative precondition (radius, distance, regime) is violated."""


class BoxMembershipError(ValueError):
    """A candidate point escapes one of the boxes it must lie in."""


@dataclass(frozen=True)
class DBox:
    """One-sided box around a point of the cube shift.

    The stable box fixes coordinates i >= 0 at the center values and frees
    each i < 0 to [x_i - eps, x_i + eps] clipped to [0,1]; the unstable box
    mirrors this.  Radius is restricted to (0, 1/4).
    """

    center: BiSeq
    eps: Fraction
    side: str  # "stable" | "unstable"

    def __post_init__(self):
        if self.center.space.kind != "unit":
            raise ValueError("box centers live in the unit-interval shift")
        object.__setattr__(self, "eps", Fraction(self.eps))
        if not (0 < self.eps < Fraction(1, 4)):
            raise ValueError("box radius must lie in (0, 1/4)")
        if self.side not in ("stable", "unstable"):
            raise ValueError(f"side must be 'stable' or 'unstable', got {self.side!r}")


def _clipped_diam(x: Fraction, eps: Fraction) -> Fraction:
    return min(x + eps, Fraction(1)) - max(x - eps, Fraction(0))


def dbox_diameter(b: DBox, n: int = 0) -> Fraction:
    """Exact diameter of the n-th shift image of the box.

    Stable boxes contract under forward shifts (n >= 0), unstable boxes
    under backward shifts (n <= 0); the per-coordinate clipped diameters
    are eventually periodic, so the weighted sum closes into a finite part
    plus a geometric series.
    """
    x, eps = b.center, b.eps
    if b.side == "stable":
        if n < 0:
            raise ValueError("stable boxes contract under forward shifts only")
        a = min(x.core_start, 0)
        total = sum(
            (_clipped_diam(value_at(x, i), eps) * Fraction(2) ** i for i in range(a, 0)),
            Fraction(0),
        )
        ll = len(x.left)
        fac = Fraction(1) / (1 - Fraction(1, 2**ll))
        for j in range(ll):
            i = a - ll + j
            total += _clipped_diam(value_at(x, i), eps) * Fraction(2) ** i * fac
        return total / Fraction(2) ** n
    if n > 0:
        raise ValueError("unstable boxes contract under backward shifts only")
    bnd = max(x.core_end, 0)
    total = sum(
        (_clipped_diam(value_at(x, i), eps) * Fraction(2) ** (-i) for i in range(0, bnd)),
        Fraction(0),
    )
    lr = len(x.right)
    fac = Fraction(1) / (1 - Fraction(1, 2**lr))
    for j in range(lr):
        i = bnd + j
        total += _clipped_diam(value_at(x, i), eps) * Fraction(2) ** (-i) * fac
    return total / Fraction(2) ** (-n)


def contraction_time(eps: Fraction, r: Fraction) -> int:
    """Least k with eps / 2^(k-2) < r; box diameters of radius eps are
    below r from the k-th iterate on."""
    eps, r = Fraction(eps), Fraction(r)
    if not (0 < r < eps):
        raise PreconditionError(f"need 0 < r < eps, got r={r}, eps={eps}")
    k = 1
    while eps / Fraction(2) ** (k - 2) >= r:
        k += 1
    return k


def _coordinate_window(*seqs: BiSeq) -> tuple:
    a = min(min(s.core_start for s in seqs), 0)
    b = max(max(s.core_end for s in seqs), 0)
    ml = lcm(*(len(s.left) for s in seqs))
    mr = lcm(*(len(s.right) for s in seqs))
    return a - ml, b + mr


def box_splice(x: BiSeq, y: BiSeq, eps: Fraction) -> BiSeq:
    """The point copying x on i >= 0 and y on i < 0: the unique candidate
    for the intersection of the stable eps-box of x with the unstable
    eps-box of y.  Membership is verified coordinate-wise over the cores
    plus one period block; distances d(x, y) >= eps/4 are rejected."""
    eps = Fraction(eps)
    d = seq_metric(x, y).value
    if d >= eps / 4:
        raise PreconditionError(f"d(x, y) = {d} is not below eps/4 = {eps / 4}")
    z = splice(y, x, cut=0)
    lo, hi = _coordinate_window(x, y, z)
    for i in range(lo, hi):
        zi = value_at(z, i)
        if i >= 0:
            if zi != value_at(x, i):
                raise BoxMembershipError(f"coordinate {i} departs the stable box center")
            if abs(zi - value_at(y, i)) > eps:
                raise BoxMembershipError(
                    f"coordinate {i}: |z_i - y_i| exceeds eps, the boxes do not meet"
                )
        else:
            if zi != value_at(y, i):
                raise BoxMembershipError(f"coordinate {i} departs the unstable box center")
            if abs(zi - value_at(x, i)) > eps:
                raise BoxMembershipError(
                    f"coordinate {i}: |z_i - x_i| exceeds eps, the boxes do not meet"
                )
    return z


def nonuniform_witness(x: BiSeq, y: BiSeq, n: int, m: int) -> BiSeq:
    """Splice of x (future) and y (past) with coordinates m and -m nudged
    by 1/n toward the far side of the interval: the nudge keeps a distance
    of at least 1/n alive at iterate m."""
    if n < 3:
        raise PreconditionError("need n >= 3 so the nudge 1/n stays below 1/2")
    if m <= n:
        raise PreconditionError("witness construction needs m > n")
    step = Fraction(1, n)
    base = splice(y, x, cut=0)
    xm = value_at(x, m)
    ym = value_at(y, -m)
    vm = xm + step if xm <= Fraction(1, 2) else xm - step
    wm = ym + step if ym <= Fraction(1, 2) else ym - step
    assert 0 <= vm <= 1 and 0 <= wm <= 1
    return with_values(base, {m: vm, -m: wm})


def _log2_ceil(x: Fraction) -> int:
    """Least c with 2^c >= x (x > 0)."""
    c = 0
    pw = Fraction(1)
    while pw < x:
        pw *= 2
        c += 1
    return c


def _windowed_side_check(point: BiSeq, other: BiSeq, eps: Fraction, direction: int, span: int):
    """Exact distances d(sigma^(direction*k) other, sigma^(direction*k) point)
    for k = 0..K, where K is large enough that the agreement-index tail
    certificate bounds everything beyond by eps.

    Returns (ok, agreement_index) with ok covering both the windowed checks
    and the existence of the tail certificate.
    """
    side = "forward" if direction > 0 else "backward"
    j = agreement_index(point, other, side)
    if j is None:
        return False, None
    if j in (AGREE_ALL_FORWARD, AGREE_ALL_BACKWARD):
        jj = 0
    else:
        jj = abs(j)
    k_max = max(span, jj + _log2_ceil(Fraction(2) / eps) + 1)
    for k in range(k_max + 1):
        d = seq_metric(shift(other, direction * k), shift(point, direction * k)).value
        if d > eps:
            return False, j
    return True, j


@dataclass(frozen=True)
class NonuniformityReport:
    n: int
    m: int
    stable_ok: bool
    unstable_ok: bool
    displacement: Fraction
    lower_bound: Fraction
    refutes_uniformity: bool

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "stable_ok": self.stable_ok,
            "unstable_ok": self.unstable_ok,
            "displacement": encode_fraction(self.displacement),
            "refutes_uniformity": self.refutes_uniformity,
        }


def nonuniformity_report(
    eps: Fraction,
    delta: Fraction,
    r: Fraction,
    k_r_claim: int,
    x: BiSeq,
    y: BiSeq,
) -> NonuniformityReport:
    """Build the slow-coordinate witness for a claimed contraction deadline
    and verify exactly that it sits in both asymptotic eps-sets while its
    m-th iterate stays at least 1/n > r away from the iterate of x."""
    eps, delta, r = Fraction(eps), Fraction(delta), Fraction(r)
    if not (0 < eps < Fraction(1, 2)):
        raise PreconditionError("need 0 < eps < 1/2")
    if not (delta < eps / 2):
        raise PreconditionError("need delta < eps/2")
    if not (0 < r < delta / 2):
        raise PreconditionError("need 0 < r < delta/2")
    d = seq_metric(x, y).value
    if d >= delta:
        raise PreconditionError(f"d(x, y) = {d} is not below delta = {delta}")
    # least n with r < 1/n < delta/2
    n = int(2 / delta) + 1
    while Fraction(1, n) >= delta / 2:
        n += 1
    if Fraction(1, n) <= r:
        raise PreconditionError(f"no integer n with r < 1/n < delta/2 (r={r}, delta={delta})")
    m = k_r_claim
    if m <= n:
        raise PreconditionError(f"claimed deadline k_r = {m} must exceed n = {n}")
    z = nonuniform_witness(x, y, n, m)
    stable_ok, _ = _windowed_side_check(z, x, eps, +1, span=4 * m)
    unstable_ok, _ = _windowed_side_check(z, y, eps, -1, span=4 * m)
    displacement = seq_metric(shift(x, m), shift(z, m)).value
    lower = Fraction(1, n)
    refutes = stable_ok and unstable_ok and displacement >= lower and lower > r
    return NonuniformityReport(
        n=n,
        m=m,
        stable_ok=stable_ok,
        unstable_ok=unstable_ok,
        displacement=displacement,
        lower_bound=lower,
        refutes_uniformity=refutes,
    )
