"""Exact angular-momentum algebra.

Half-integer quantum numbers are stored as doubled integers so that every
triangle and parity check is integer-exact.  Wigner 3-j and 6-j symbols are
evaluated with the Racah single-sum formula using exact rational arithmetic
(python big ints via ``fractions.Fraction``) and converted to float at the
very end.  Phase conventions follow Condon-Shortley.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering


@total_ordering
@dataclass(frozen=True)
class HalfInt:
    """A half-integer j stored as the doubled integer 2j."""

    twice: int

    def __post_init__(self):
        if not isinstance(self.twice, int):
            raise TypeError("HalfInt stores 2j as an int, got %r" % (self.twice,))

    @classmethod
    def of(cls, value) -> "HalfInt":
        """Coerce an int, float multiple of 1/2, or HalfInt."""
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, int):
            return cls(2 * value)
        doubled = 2 * value
        if doubled != round(doubled):
            raise ValueError("%r is not a half-integer" % (value,))
        return cls(int(round(doubled)))

    def __float__(self) -> float:
        return self.twice / 2.0

    def __add__(self, other):
        return HalfInt(self.twice + HalfInt.of(other).twice)

    __radd__ = __add__

    def __sub__(self, other):
        return HalfInt(self.twice - HalfInt.of(other).twice)

    def __rsub__(self, other):
        return HalfInt(HalfInt.of(other).twice - self.twice)

    def __neg__(self):
        return HalfInt(-self.twice)

    def __abs__(self):
        return HalfInt(abs(self.twice))

    def __eq__(self, other):
        try:
            return self.twice == HalfInt.of(other).twice
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(("HalfInt", self.twice))

    def __lt__(self, other):
        return self.twice < HalfInt.of(other).twice

    def __repr__(self):
        if self.twice % 2 == 0:
            return "HalfInt(%d)" % (self.twice // 2)
        return "HalfInt(%d/2)" % self.twice

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def as_fraction(self) -> Fraction:
        return Fraction(self.twice, 2)


def _fact(n: int) -> int:
    if n < 0:
        raise ValueError("negative factorial argument")
    return math.factorial(n)


def _triangle_ok(a2: int, b2: int, c2: int) -> bool:
    # doubled-integer triangle condition with parity of the triad sum
    if (a2 + b2 + c2) % 2 != 0:
        return False
    return abs(a2 - b2) <= c2 <= a2 + b2


def _delta_sq(a2: int, b2: int, c2: int) -> Fraction:
    """Squared triangle coefficient, exact."""
    return Fraction(
        _fact((a2 + b2 - c2) // 2)
        * _fact((a2 - b2 + c2) // 2)
        * _fact((-a2 + b2 + c2) // 2),
        _fact((a2 + b2 + c2) // 2 + 1),
    )


def _sqrt_fraction(f: Fraction) -> float:
    return math.sqrt(f.numerator / f.denominator)


def wigner3j(j1, j2, j3, m1, m2, m3) -> float:
    """Wigner 3-j symbol; returns 0.0 when a selection rule fails.

    Arguments may be HalfInt, int, or float half-integers.  Raises on
    m-values whose parity is inconsistent with the corresponding j.
    """
    j1, j2, j3 = HalfInt.of(j1), HalfInt.of(j2), HalfInt.of(j3)
    m1, m2, m3 = HalfInt.of(m1), HalfInt.of(m2), HalfInt.of(m3)
    for j, m in ((j1, m1), (j2, m2), (j3, m3)):
        if (j.twice - m.twice) % 2 != 0:
            raise ValueError("m=%s has wrong parity for j=%s" % (m, j))
        if abs(m.twice) > j.twice:
            return 0.0
    if m1.twice + m2.twice + m3.twice != 0:
        return 0.0
    if not _triangle_ok(j1.twice, j2.twice, j3.twice):
        return 0.0

    a2, b2, c2 = j1.twice, j2.twice, j3.twice
    ma2, mb2, mc2 = m1.twice, m2.twice, m3.twice

    # Racah sum over t (integer); bounds from non-negativity of factorials
    t_min = max(0, (b2 - c2 - ma2) // 2, (a2 - c2 + mb2) // 2)
    t_max = min(
        (a2 + b2 - c2) // 2,
        (a2 - ma2) // 2,
        (b2 + mb2) // 2,
    )
    if t_min > t_max:
        return 0.0
    total = Fraction(0)
    for t in range(t_min, t_max + 1):
        denom = (
            _fact(t)
            * _fact((c2 - b2 + ma2) // 2 + t)
            * _fact((c2 - a2 - mb2) // 2 + t)
            * _fact((a2 + b2 - c2) // 2 - t)
            * _fact((a2 - ma2) // 2 - t)
            * _fact((b2 + mb2) // 2 - t)
        )
        total += Fraction(-1 if t % 2 else 1, denom)
    if total == 0:
        return 0.0
    norm = _delta_sq(a2, b2, c2) * Fraction(
        _fact((a2 + ma2) // 2)
        * _fact((a2 - ma2) // 2)
        * _fact((b2 + mb2) // 2)
        * _fact((b2 - mb2) // 2)
        * _fact((c2 + mc2) // 2)
        * _fact((c2 - mc2) // 2)
    )
    phase = -1 if ((a2 - b2 - mc2) // 2) % 2 else 1
    sign = 1 if total > 0 else -1
    return phase * sign * _sqrt_fraction(norm * total * total)


def wigner6j(a, b, c, d, e, f) -> float:
    """Wigner 6-j symbol {a b c; d e f}; 0.0 when any triad is non-triangular."""
    a, b, c = HalfInt.of(a), HalfInt.of(b), HalfInt.of(c)
    d, e, f = HalfInt.of(d), HalfInt.of(e), HalfInt.of(f)
    triads = (
        (a.twice, b.twice, c.twice),
        (a.twice, e.twice, f.twice),
        (d.twice, b.twice, f.twice),
        (d.twice, e.twice, c.twice),
    )
    for t in triads:
        if not _triangle_ok(*t):
            return 0.0

    # all in doubled integers; the four triad sums and three pair sums are even
    s_abc = (a.twice + b.twice + c.twice) // 2
    s_aef = (a.twice + e.twice + f.twice) // 2
    s_dbf = (d.twice + b.twice + f.twice) // 2
    s_dec = (d.twice + e.twice + c.twice) // 2
    p_abde = (a.twice + b.twice + d.twice + e.twice) // 2
    p_bcef = (b.twice + c.twice + e.twice + f.twice) // 2
    p_acdf = (a.twice + c.twice + d.twice + f.twice) // 2

    t_min = max(s_abc, s_aef, s_dbf, s_dec)
    t_max = min(p_abde, p_bcef, p_acdf)
    if t_min > t_max:
        return 0.0
    total = Fraction(0)
    for t in range(t_min, t_max + 1):
        denom = (
            _fact(t - s_abc)
            * _fact(t - s_aef)
            * _fact(t - s_dbf)
            * _fact(t - s_dec)
            * _fact(p_abde - t)
            * _fact(p_bcef - t)
            * _fact(p_acdf - t)
        )
        total += Fraction((-1 if t % 2 else 1) * _fact(t + 1), denom)
    if total == 0:
        return 0.0
    norm = (
        _delta_sq(a.twice, b.twice, c.twice)
        * _delta_sq(a.twice, e.twice, f.twice)
        * _delta_sq(d.twice, b.twice, f.twice)
        * _delta_sq(d.twice, e.twice, c.twice)
    )
    sign = 1 if total > 0 else -1
    return sign * _sqrt_fraction(norm * total * total)


def _jprime(J: HalfInt, p: int) -> HalfInt:
    return J + (1 if p != 0 else 0)


def reduced_coupling_strength(J, p: int) -> float:
    """Per-transition-class product of the simplified 6-j and the
    sqrt((2J+1)(2J'+1)(L+1)) factor, with the radial scale set to 1.

    p = +1:      -sqrt(2J+3) * sqrt((2J+1) / (2(2J+2)))
    p = -1:      +sqrt(2J+3) * sqrt((2J+1) / (2(2J+2)))
    p = 0:       (1/sqrt(J)) * sqrt((2J+1) / (2(2J+2)))

    The p=+1 six-j {L+1, L+3/2, 1/2; L+1/2, L, 1} is negative for every L,
    hence the leading minus; the magnitudes are the familiar closed forms.
    A per-class global sign has no effect on dressed eigenvalues.
    """
    J = HalfInt.of(J)
    if p not in (-1, 0, 1):
        raise ValueError("p must be -1, 0, or +1")
    twoJ = J.twice
    common = math.sqrt((twoJ + 1) / (2.0 * (twoJ + 2)))
    if p == 0:
        if twoJ == 0:
            raise ValueError("p=0 requires J >= 1/2")
        return common / math.sqrt(twoJ / 2.0)
    sign = -1.0 if p == 1 else 1.0
    return sign * common * math.sqrt(twoJ + 3)


def orbital_angular_momentum(J, p: int) -> int:
    """L of the lower level for a transition class (S = 1/2 throughout)."""
    J = HalfInt.of(J)
    if p in (0, 1):
        L2 = J.twice - 1  # J = L + 1/2
    else:
        L2 = J.twice + 1  # J = L - 1/2  (only reached from higher-L lower states)
    if L2 < 0 or L2 % 2 != 0:
        raise ValueError("class (J=%s, p=%d) has no valid L" % (J, p))
    return L2 // 2


def dipole_angular_factor(J, p: int, mJ, mJp, q) -> float:
    """Angular part of <J' mJ'| r_q |J mJ> for a transition class, radial
    matrix element set to 1.  Zero (not an error) when mJ' != mJ + q.
    """
    J = HalfInt.of(J)
    mJ, mJp, q = HalfInt.of(mJ), HalfInt.of(mJp), HalfInt.of(q)
    if not q.is_integer or abs(q.twice) > 2:
        raise ValueError("q must be -1, 0, or +1")
    Jp = _jprime(J, p)
    if abs(mJ.twice) > J.twice or abs(mJp.twice) > Jp.twice:
        raise ValueError("|m| exceeds j")
    if mJp.twice != mJ.twice + q.twice:
        return 0.0
    threej = wigner3j(Jp, HalfInt.of(1), J, -mJp, q, mJ)
    # phase exponent J' + J - mJ' - 1/2 is an integer for half-integer J, J'
    exp2 = Jp.twice + J.twice - mJp.twice - 1
    phase = -1 if (exp2 // 2) % 2 else 1
    return phase * threej * reduced_coupling_strength(J, p)


def dipole_angular_factor_generic(J, p: int, mJ, mJp, q) -> float:
    """Same matrix element evaluated from generic 3-j/6-j symbols without the
    per-class closed forms; independent cross-check route.
    """
    J = HalfInt.of(J)
    mJ, mJp, q = HalfInt.of(mJ), HalfInt.of(mJp), HalfInt.of(q)
    Jp = _jprime(J, p)
    if mJp.twice != mJ.twice + q.twice:
        return 0.0
    L = orbital_angular_momentum(J, p)
    Lp = L + 1
    half = HalfInt(1)
    threej = wigner3j(Jp, HalfInt.of(1), J, -mJp, q, mJ)
    sixj = wigner6j(Lp, Jp, half, J, L, HalfInt.of(1))
    # (-1)^(J'-mJ') * (-1)^(L'+S'+J+1) * (-1)^(L') with S' = 1/2
    exp2 = (Jp.twice - mJp.twice) + (2 * Lp + 1 + J.twice + 2) + 2 * Lp
    phase = -1 if (exp2 // 2) % 2 else 1
    reduced = math.sqrt((J.twice + 1) * (Jp.twice + 1) * Lp)
    return phase * threej * reduced * sixj
