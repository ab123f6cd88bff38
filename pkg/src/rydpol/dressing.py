"""RF-dressed manifold coupling matrices, eigenvalue spectra, and envelopes.

A transition class (J, p) labels a dipole-allowed pair of Rydberg levels
r1 (angular momentum J) and r2 (J' = J + |p|).  The RF field hybridizes
their Zeeman substates; the angular coupling matrix is real symmetric of
dimension (2J+1) + (2J'+1) and its eigenvalues, in units of the RF Rabi
scale, are the dressed-state energies plotted against the phase angle phi.

Basis ordering: r1 substates m = -J..J ascending, then r2 substates
m = -J'..J' ascending.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .angular import HalfInt, dipole_angular_factor, wigner3j
from .sop import RfSop, sop_from_phi

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class TransitionClass:
    """A (J, p) pair; p = 0 couples J <-> J, p = +-1 couples J <-> J+1."""

    J: HalfInt
    p: int

    def __post_init__(self):
        object.__setattr__(self, "J", HalfInt.of(self.J))
        if self.p not in (-1, 0, 1):
            raise ValueError("p must be -1, 0, or +1")
        if self.J.twice < 1:
            raise ValueError("J must be at least 1/2")

    @classmethod
    def of(cls, J, p: int) -> "TransitionClass":
        return cls(HalfInt.of(J), p)

    @property
    def j_prime(self) -> HalfInt:
        return self.J + (1 if self.p != 0 else 0)

    @property
    def dim(self) -> int:
        return (self.J.twice + 1) + (self.j_prime.twice + 1)

    @property
    def dim_r1(self) -> int:
        return self.J.twice + 1

    @property
    def dim_r2(self) -> int:
        return self.j_prime.twice + 1

    def basis(self) -> list:
        out = [("r1", HalfInt(m2)) for m2 in range(-self.J.twice, self.J.twice + 1, 2)]
        out += [
            ("r2", HalfInt(m2))
            for m2 in range(-self.j_prime.twice, self.j_prime.twice + 1, 2)
        ]
        return out

    def label(self) -> str:
        num = "%d/2" % self.J.twice if self.J.twice % 2 else "%d" % (self.J.twice // 2)
        sign = {0: "0", 1: "+", -1: "-"}[self.p]
        return "%s^%s" % (num, sign)


EXPERIMENTAL_CLASSES = (
    TransitionClass.of(0.5, 0),
    TransitionClass.of(0.5, 1),
    TransitionClass.of(1.5, 0),
    TransitionClass.of(1.5, 1),
)

# The (1/2, 0) closed-form eigenvalues lambda_n = Re exp{i[phi/2+(2n-1)pi/4]}
# are stated in a unit where the single-channel Rabi coupling is 1; the raw
# angular matrix for that class carries an extra overall factor 2/3.  The
# matrix is rescaled here so the closed form holds verbatim.  All other
# classes keep the raw angular normalization, which is the one the (3/2,+-)
# envelope formulas are exact in.
def _class_scale(cls: TransitionClass) -> float:
    if cls.J.twice == 1 and cls.p == 0:
        return 1.5
    return 1.0


@dataclass(frozen=True)
class CouplingMatrix:
    cls: TransitionClass
    phi: float | None
    entries: np.ndarray
    basis: tuple

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)


@dataclass(frozen=True)
class EigenSpectrum:
    phi: float
    eigenvalues: np.ndarray
    degeneracies: tuple

    @property
    def distinct_count(self) -> int:
        return len(self.degeneracies)


@dataclass(frozen=True)
class EnvelopePair:
    outer_plus: float
    outer_minus: float
    inner_plus: float
    inner_minus: float


def _prefactor(cls: TransitionClass) -> float:
    twoJ = cls.J.twice
    ap = abs(cls.p)
    first = math.sqrt((twoJ + 1) / (2.0 * (twoJ + 2)))
    second = math.sqrt((twoJ + 3.0) ** ap / (twoJ / 2.0) ** (1 - ap))
    return first * second


@lru_cache(maxsize=None)
def _channel_matrices(cls: TransitionClass) -> tuple:
    """phi-independent coefficient matrices (C_plus, C_minus) such that the
    coupling matrix is C_plus*(cos(phi/2)+sin(phi/2)) + C_minus*(cos-sin).
    """
    J, ap = cls.J, abs(cls.p)
    Jp = cls.j_prime
    dim = cls.dim
    pref = _prefactor(cls) * _class_scale(cls)
    out = {}
    for q in (1, -1):
        C = np.zeros((dim, dim))
        for i in range(1, dim + 1):
            for j in range(1, dim + 1):
                total = 0.0
                for a2, b2 in (
                    (J.twice + 2 - 2 * j, -3 * J.twice - 2 * ap - 4 + 2 * i),
                    (J.twice + 2 - 2 * i, -3 * J.twice - 2 * ap - 4 + 2 * j),
                ):
                    if abs(a2) <= J.twice and abs(b2) <= Jp.twice:
                        total += wigner3j(
                            J, HalfInt.of(1), Jp, HalfInt(a2), q, HalfInt(b2)
                        )
                C[i - 1, j - 1] = pref * total
        out[q] = C
    return out[1], out[-1]


def coupling_matrix(cls: TransitionClass, phi: float) -> CouplingMatrix:
    """Real symmetric angular coupling matrix at phase angle phi."""
    c_plus, c_minus = _channel_matrices(cls)
    ch, sh = math.cos(phi / 2.0), math.sin(phi / 2.0)
    entries = c_plus * (ch + sh) + c_minus * (ch - sh)
    return CouplingMatrix(cls, phi, entries, tuple(cls.basis()))


@lru_cache(maxsize=None)
def _oracle_blocks(cls: TransitionClass) -> tuple:
    """Wigner-Eckart dipole blocks B_q (r2 rows x r1 columns) per q channel."""
    J, Jp = cls.J, cls.j_prime
    blocks = {}
    for q in (1, -1):
        B = np.zeros((cls.dim_r2, cls.dim_r1))
        for col, m2 in enumerate(range(-J.twice, J.twice + 1, 2)):
            m2p = m2 + 2 * q
            if abs(m2p) > Jp.twice:
                continue
            row = (m2p + Jp.twice) // 2
            B[row, col] = dipole_angular_factor(
                J, cls.p, HalfInt(m2), HalfInt(m2p), q
            )
        blocks[q] = B
    return blocks[1], blocks[-1]


def oracle_matrix(cls: TransitionClass, sop: RfSop) -> CouplingMatrix:
    """Brute-force dressing matrix from Wigner-Eckart dipole elements and the
    SOP's spherical amplitudes (radial scale 1), Hermitized.

    Built independently of the closed-form entry formula; its eigenvalue
    multiset matches coupling_matrix up to one global positive scale.
    """
    b_plus, b_minus = _oracle_blocks(cls)
    block = sop.amp_plus * b_plus + sop.amp_minus * b_minus
    n1 = cls.dim_r1
    H = np.zeros((cls.dim, cls.dim), dtype=complex)
    H[n1:, :n1] = block
    H[:n1, n1:] = block.conj().T
    return CouplingMatrix(cls, sop.phi, H, tuple(cls.basis()))


def oracle_scale(cls: TransitionClass) -> float:
    """Positive scale s with eigvals(coupling_matrix) = s * eigvals(oracle).

    The oracle uses unit-normalized SOP amplitudes (1/sqrt(2) smaller per
    channel than the phase-angle form) and the raw angular normalization.
    """
    return _SQRT2 * _class_scale(cls)


def group_degeneracies(eigenvalues: np.ndarray, tol: float) -> tuple:
    """(value, multiplicity) pairs for an ascending eigenvalue array."""
    groups = []
    for ev in eigenvalues:
        if groups and ev - groups[-1][0][-1] <= tol:
            groups[-1][0].append(ev)
        else:
            groups.append([[ev]])
    return tuple((float(np.mean(g[0])), len(g[0])) for g in groups)


def eigen_spectrum(
    cls: TransitionClass, phi: float, degeneracy_tol: float = 1e-9
) -> EigenSpectrum:
    if degeneracy_tol <= 0:
        raise ValueError("degeneracy_tol must be positive")
    ev = np.sort(np.linalg.eigvalsh(coupling_matrix(cls, phi).entries))
    return EigenSpectrum(phi, ev, group_degeneracies(ev, degeneracy_tol))


def closed_form_eigenvalues_half(phi: float) -> np.ndarray:
    """The four (1/2, 0) eigenvalues Re exp{i[phi/2 + (2n-1)pi/4]}, n=1..4."""
    n = np.arange(1, 5)
    return np.cos(phi / 2.0 + (2 * n - 1) * np.pi / 4.0)


def spectrogram(
    cls: TransitionClass, phi_grid, degeneracy_tol: float = 1e-9
) -> list:
    phi_grid = np.asarray(phi_grid, dtype=float)
    if phi_grid.size == 0:
        raise ValueError("phi grid must be non-empty")
    return [eigen_spectrum(cls, float(phi), degeneracy_tol) for phi in phi_grid]


def envelopes_exact(phi: float) -> EnvelopePair:
    """Exact outer/inner eigenvalue envelopes for the (3/2, +-) classes."""
    s = abs(math.sin(phi))
    outer = math.sqrt(10.0 + 3.0 * s + math.sqrt(33.0 * s * s + 12.0 * s + 4.0)) / 5.0
    inner = math.sqrt(10.0 - 3.0 * s - math.sqrt(33.0 * s * s - 12.0 * s + 4.0)) / 5.0
    return EnvelopePair(outer, -outer, inner, -inner)


def envelopes_approx(phi: float) -> EnvelopePair:
    """Harmonic-plus-constant approximation to the (3/2, +-) envelopes."""
    s = abs(math.sin(phi))
    outer = 2.0 * math.sqrt(3.0) / 5.0 + 2.0 * (math.sqrt(5.0) - math.sqrt(3.0)) / 5.0 * s
    inner = math.sqrt(2.0) / 5.0 * (2.0 - s * s)
    return EnvelopePair(outer, -outer, inner, -inner)


def spectrogram_rows(spectra: list):
    """Yield (phi, band_index, eigenvalue) rows in deterministic order."""
    for spec in spectra:
        for k, ev in enumerate(spec.eigenvalues):
            yield spec.phi, k, float(ev)


def write_spectrogram_csv(path, spectra: list) -> None:
    with open(path, "w") as fh:
        fh.write("phi,band_index,eigenvalue\n")
        for phi, k, ev in spectrogram_rows(spectra):
            fh.write("%.9g,%d,%.9g\n" % (phi, k, ev))


def spectrogram_json_dict(spectra: list) -> dict:
    return {
        "phi": [s.phi for s in spectra],
        "eigenvalues": [[float(v) for v in s.eigenvalues] for s in spectra],
    }


def write_envelopes_csv(path, phi_grid, exact: bool = True) -> None:
    fn = envelopes_exact if exact else envelopes_approx
    kind = "exact" if exact else "approx"
    with open(path, "w") as fh:
        fh.write("phi,eo_plus,eo_minus,ei_plus,ei_minus,exact_or_approx\n")
        for phi in phi_grid:
            e = fn(float(phi))
            fh.write(
                "%.9g,%.9g,%.9g,%.9g,%.9g,%s\n"
                % (phi, e.outer_plus, e.outer_minus, e.inner_plus, e.inner_minus, kind)
            )
