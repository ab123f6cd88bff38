"""Recover candidate phase angles from dressed-state spectra.

Two inversion kernels exist, one per invertible class, and they use
*different* ratio conventions:

* (1/2, 0):   R = inner span / outer span, 0 <= R <= 1
* (3/2, +-):  R = outer span / inner span, sqrt(3/2) <= R <= sqrt(10)

Both produce a principal angle and the fourfold candidate set
{phi, pi-phi, pi+phi, 2pi-phi}.  For (3/2, +-) the prominence of the
central peak prunes the set to a twofold {phi, 2pi-phi} pair; combining
measurements in the standard and rotated-circular optical configurations
singles out a unique phi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq
from scipy.signal import find_peaks, peak_prominences

from .dressing import TransitionClass, eigen_spectrum, envelopes_exact

_TWO_PI = 2.0 * math.pi
R_FIVE_MIN = math.sqrt(1.5)
R_FIVE_MAX = math.sqrt(10.0)


class InversionError(Exception):
    pass


class FewerThanFourPeaks(InversionError):
    pass


class NonStraddling(InversionError):
    pass


class DegenerateOuter(InversionError):
    pass


class DegenerateInner(InversionError):
    pass


class OutOfRange(InversionError):
    pass


class NotInvertible(InversionError):
    pass


@dataclass(frozen=True)
class PeakSet:
    positions: tuple
    prominences: tuple
    lambda_o_plus: float
    lambda_o_minus: float
    lambda_i_plus: float
    lambda_i_minus: float
    central_prominence: float = 0.0

    def __post_init__(self):
        if not (
            self.lambda_o_minus <= self.lambda_i_minus <= 0.0
            and 0.0 <= self.lambda_i_plus <= self.lambda_o_plus
        ):
            raise NonStraddling(
                "peak pairs must straddle zero: %r"
                % [self.lambda_o_minus, self.lambda_i_minus,
                   self.lambda_i_plus, self.lambda_o_plus]
            )


@dataclass(frozen=True)
class PhaseCandidates:
    principal: float
    candidates: tuple
    pruned: tuple
    ambiguity_class: str  # "fourfold" | "twofold" | "unique"
    ratio: float
    ambiguous_prominence: bool = False

    def contains(self, phi: float, tol: float) -> bool:
        return any(_angle_dist(phi, c) <= tol for c in self.pruned)


def _angle_dist(a: float, b: float) -> float:
    d = abs((a - b) % _TWO_PI)
    return min(d, _TWO_PI - d)


def _refine_quadratic(x: np.ndarray, y: np.ndarray, k: int) -> tuple:
    """Sub-sample peak (position, height) via a parabola through 3 points."""
    if k == 0 or k == len(x) - 1:
        return float(x[k]), float(y[k])
    coeffs = np.polyfit(x[k - 1 : k + 2], y[k - 1 : k + 2], 2)
    a, b, c = coeffs
    if a >= 0:  # not locally concave; keep the grid point
        return float(x[k]), float(y[k])
    xm = -b / (2.0 * a)
    if not (x[k - 1] <= xm <= x[k + 1]):
        return float(x[k]), float(y[k])
    return float(xm), float(np.polyval(coeffs, xm))


def extract_peaks(
    detuning,
    amplitude,
    min_prominence: float = 0.05,
    merge_tol: float = 0.0,
    central_tol: float | None = None,
) -> PeakSet:
    """Locate spectral peaks and assign the outer/inner eigenvalue pairs.

    min_prominence is relative to the amplitude range.  merge_tol merges
    peaks closer than the given detuning distance at their
    prominence-weighted centroid.  central_tol (defaults to merge_tol)
    decides whether a peak counts as the central Delta_c = 0 feature.
    """
    x = np.asarray(detuning, dtype=float)
    y = np.asarray(amplitude, dtype=float)
    if x.size < 8:
        raise ValueError("need at least 8 samples")
    if np.any(np.diff(x) <= 0):
        raise ValueError("detuning grid must be strictly increasing")
    if central_tol is None:
        central_tol = merge_tol

    span = float(np.ptp(y))
    if span <= 0:
        raise FewerThanFourPeaks("flat spectrum")
    idx, props = find_peaks(y, prominence=min_prominence * span)
    if idx.size == 0:
        raise FewerThanFourPeaks("no peaks above prominence threshold")

    peaks = []
    for k, prom in zip(idx, props["prominences"]):
        pos, _ = _refine_quadratic(x, y, int(k))
        peaks.append((pos, float(prom)))
    peaks.sort()

    if merge_tol > 0:
        merged = []
        for pos, prom in peaks:
            if merged and pos - merged[-1][0] < merge_tol:
                p0, w0 = merged[-1]
                merged[-1] = ((p0 * w0 + pos * prom) / (w0 + prom), w0 + prom)
            else:
                merged.append((pos, prom))
        peaks = merged

    positions = tuple(p for p, _ in peaks)
    proms = tuple(w for _, w in peaks)

    central = [(p, w) for p, w in peaks if abs(p) <= central_tol]
    central_prom = max((w for _, w in central), default=0.0)
    side = [(p, w) for p, w in peaks if abs(p) > central_tol]
    neg = [p for p, _ in side if p < 0]
    pos = [p for p, _ in side if p > 0]

    if len(side) >= 4 and neg and pos:
        lo_m, lo_p = min(neg), max(pos)
        li_m, li_p = max(neg), min(pos)
    elif len(side) == 2 and neg and pos:
        if central:
            # central feature is the coalesced inner pair
            lo_m, lo_p = min(neg), max(pos)
            li_m = li_p = 0.0
        else:
            # two-peak degenerate spectrum: inner and outer pairs coincide
            lo_m, lo_p = min(neg), max(pos)
            li_m, li_p = lo_m, lo_p
    elif len(side) >= 2 and not (neg and pos):
        raise NonStraddling("all side peaks on one side of zero detuning")
    else:
        raise FewerThanFourPeaks("found %d side peaks" % len(side))

    return PeakSet(positions, proms, lo_p, lo_m, li_p, li_m, central_prom)


def ratio_half(peaks: PeakSet, tol: float = 1e-9) -> float:
    """Inner span over outer span for a (1/2, 0) spectrum; 0 <= R <= 1."""
    outer = peaks.lambda_o_plus - peaks.lambda_o_minus
    if outer <= tol:
        raise DegenerateOuter("outer span %g below tolerance" % outer)
    r = (peaks.lambda_i_plus - peaks.lambda_i_minus) / outer
    if r > 1.0 + 1e-6:
        raise OutOfRange("ratio %g exceeds 1" % r)
    return min(max(r, 0.0), 1.0)


def invert_half(R: float, tol: float = 1e-9, angle_tol: float = 1e-9) -> PhaseCandidates:
    """Candidate phases for a (1/2, 0) ratio: phi~ = 2[pi/4 - arctan R]."""
    if R < -tol or R > 1.0 + tol:
        raise OutOfRange("ratio %g outside [0, 1]" % R)
    R = min(max(R, 0.0), 1.0)
    principal = 2.0 * (math.pi / 4.0 - math.atan(R))
    cands = _fourfold(principal, angle_tol)
    return PhaseCandidates(
        principal, cands, cands, _ambiguity_name(len(cands)), R
    )


def _fourfold(principal: float, angle_tol: float) -> tuple:
    raw = [
        principal % _TWO_PI,
        (math.pi - principal) % _TWO_PI,
        (math.pi + principal) % _TWO_PI,
        (_TWO_PI - principal) % _TWO_PI,
    ]
    out = []
    for c in sorted(raw):
        if not out or _angle_dist(c, out[-1]) > angle_tol:
            out.append(c)
    if len(out) > 1 and _angle_dist(out[0], out[-1]) <= angle_tol:
        out.pop()
    return tuple(out)


def _ambiguity_name(n: int) -> str:
    return {1: "unique", 2: "twofold"}.get(n, "fourfold")


def ratio_five_half(peaks: PeakSet, tol: float = 1e-9) -> float:
    """Outer span over inner span for a (3/2, +-) spectrum."""
    inner = peaks.lambda_i_plus - peaks.lambda_i_minus
    if inner <= tol:
        raise DegenerateInner("inner span %g below tolerance" % inner)
    return (peaks.lambda_o_plus - peaks.lambda_o_minus) / inner


def envelope_ratio_exact(phi: float) -> float:
    e = envelopes_exact(phi)
    return e.outer_plus / e.inner_plus


def phase_from_ratio_approx(R: float) -> float:
    """Principal angle from the quadratic (approximate-envelope) inversion."""
    disc = 4.0 * R * R - 2.0 * R * math.sqrt(6.0) + 8.0 - 2.0 * math.sqrt(15.0)
    arg = (math.sqrt(max(disc, 0.0)) - math.sqrt(5.0) + math.sqrt(3.0)) / (
        math.sqrt(2.0) * R
    )
    return math.asin(min(max(arg, -1.0), 1.0))


def phase_from_ratio_exact(R: float) -> float:
    """Principal angle solving the exact envelope ratio; root-refined from
    the quadratic-formula estimate.
    """
    if R <= R_FIVE_MIN:
        return 0.0
    if R >= R_FIVE_MAX:
        return math.pi / 2.0
    return brentq(
        lambda phi: envelope_ratio_exact(phi) - R, 0.0, math.pi / 2.0, xtol=1e-13
    )


def prominence_interval(config: str) -> tuple:
    """phi interval in which the central peak is prominent for an optics
    configuration."""
    if config == "standard":
        return (math.pi / 2.0, 3.0 * math.pi / 2.0)
    if config in ("rotated_circular", "rotated-circular"):
        return (0.0, math.pi)
    raise ValueError("unknown optics configuration %r" % config)


def invert_five_half(
    R: float,
    central_prominence: float,
    central_threshold: float,
    config: str = "standard",
    dead_band: float = 0.0,
    tol: float = 1e-6,
    angle_tol: float = 1e-9,
    refine: bool = True,
) -> PhaseCandidates:
    """Candidate phases for a (3/2, +-) ratio, pruned by the central-peak
    prominence.

    With refine=True the principal angle is solved against the exact
    envelopes (the quadratic formula serving as the starting estimate);
    otherwise the quadratic closed form is used as-is.
    """
    if R < R_FIVE_MIN - tol or R > R_FIVE_MAX + tol:
        raise OutOfRange(
            "ratio %g outside [sqrt(3/2), sqrt(10)]" % R
        )
    R = min(max(R, R_FIVE_MIN), R_FIVE_MAX)
    principal = phase_from_ratio_exact(R) if refine else phase_from_ratio_approx(R)
    cands = _fourfold(principal, angle_tol)

    if dead_band > 0 and abs(central_prominence - central_threshold) <= dead_band:
        return PhaseCandidates(
            principal, cands, cands, _ambiguity_name(len(cands)), R,
            ambiguous_prominence=True,
        )

    lo, hi = prominence_interval(config)
    inside = central_prominence > central_threshold
    edge = 1e-9
    pruned = tuple(
        c
        for c in cands
        if (lo - edge <= c <= hi + edge) == inside
    )
    if not pruned:  # prominence contradicts every candidate; keep all
        pruned = cands
    return PhaseCandidates(
        principal, cands, pruned, _ambiguity_name(len(pruned)), R
    )


def combine_candidates(first: PhaseCandidates, second: PhaseCandidates,
                       angle_tol: float = 1e-6) -> tuple:
    """Intersection of two pruned candidate sets (e.g. the two optics runs)."""
    out = []
    for a in first.pruned:
        for b in second.pruned:
            if _angle_dist(a, b) <= angle_tol:
                out.append((a + b) / 2.0 if abs(a - b) < math.pi else a)
    return tuple(sorted(set(out)))


def peakset_from_eigenvalues(cls: TransitionClass, eigenvalues,
                             zero_tol: float = 1e-9) -> PeakSet:
    """Idealized PeakSet taken directly from dressed eigenvalues (no line
    shape); the independent route for eigenvalue-level round trips."""
    ev = np.sort(np.asarray(eigenvalues, dtype=float))
    nonzero = ev[np.abs(ev) > zero_tol]
    has_central = len(nonzero) < len(ev)
    if len(nonzero) == 0:
        raise DegenerateOuter("all eigenvalues at zero")
    lo_m, lo_p = float(nonzero[0]), float(nonzero[-1])
    if cls.p == 0 and cls.J.twice == 1:
        by_abs = np.sort(np.abs(ev))
        li = float(by_abs[1]) if by_abs[1] > zero_tol else 0.0
        li_m, li_p = -li, li
        if li == 0.0:
            li_m = li_p = 0.0
    else:
        neg = nonzero[nonzero < 0]
        pos = nonzero[nonzero > 0]
        if len(neg) == 0 or len(pos) == 0:
            raise NonStraddling("eigenvalues do not straddle zero")
        li_m, li_p = float(neg.max()), float(pos.min())
    return PeakSet(
        tuple(float(v) for v in ev), tuple(1.0 for _ in ev),
        lo_p, lo_m, li_p, li_m, 1.0 if has_central else 0.0,
    )


@dataclass(frozen=True)
class RoundTripReport:
    cls: TransitionClass
    phi_true: float
    per_config: dict
    combined: tuple
    recovered: bool
    angle_tol: float


def round_trip(
    cls: TransitionClass,
    phi_true: float,
    configs=("standard",),
    angle_tol: float = 1e-6,
) -> RoundTripReport:
    """Eigenvalue-level forward-and-back check: spectrum -> ratio -> phases.

    For the (3/2, +) class the central-peak prominence is modeled ideally:
    prominent exactly when phi_true falls in the configuration's
    prominence interval.  (EIT-level round trips with simulated line
    shapes live in the eitsim demos/tests.)
    """
    phi_true = phi_true % _TWO_PI
    half = cls.J.twice == 1 and cls.p == 0
    five = cls.J.twice == 3 and cls.p != 0
    if not (half or five):
        raise NotInvertible(
            "inversion supports classes (1/2,0) and (3/2,+-), not %s" % cls.label()
        )
    spec = eigen_spectrum(cls, phi_true)
    peaks = peakset_from_eigenvalues(cls, spec.eigenvalues)
    per_config = {}
    if half:
        result = invert_half(ratio_half(peaks))
        per_config["any"] = result
        combined = result.pruned
    else:
        R = ratio_five_half(peaks)
        for config in configs:
            lo, hi = prominence_interval(config)
            cp = 1.0 if lo <= phi_true <= hi else 0.0
            per_config[config] = invert_five_half(R, cp, 0.5, config=config)
        results = list(per_config.values())
        combined = results[0].pruned
        for other in results[1:]:
            inter = combine_candidates(
                PhaseCandidates(0, combined, combined, "", R), other,
                angle_tol=max(angle_tol, 1e-9),
            )
            combined = inter if inter else combined
    recovered = any(_angle_dist(phi_true, c) <= angle_tol for c in combined)
    return RoundTripReport(cls, phi_true, per_config, combined, recovered, angle_tol)
