"""Steady-state ladder-EIT simulation through the RF-dressed manifold.

Level scheme: single ground state g, intermediate manifold i (J_i = 3/2 by
default), and the RF-coupled Rydberg pair r1/r2 of a transition class,
optionally joined by a third Rydberg manifold r3 offset by delta3 (MHz)
that the RF (and the coupling laser) reach off-resonantly.

The probe drives g -> i and the coupling laser drives i -> r1 or i -> r2,
whichever is dipole-accessible in the experiment being modeled (the
S-series classes are probed on r1, the D-series on r2).  Peak positions in
the probe response vs coupling detuning Delta_c sit at omega_rf times the
dressed eigenvalues; optics only reshape peak prominences.

All rates and detunings are in MHz (angular frequency units absorbed into
the Rabi conventions).
"""

from __future__ import annotations

import json
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .angular import HalfInt, wigner3j
from .dressing import TransitionClass, oracle_matrix, oracle_scale, _oracle_blocks
from .sop import OpticalConfig, OPTICS_PRESETS, RfSop, sop_from_phi, standard_optics


class SteadyStateError(Exception):
    pass


class NonUniqueSteadyState(SteadyStateError):
    pass


@dataclass(frozen=True)
class ThirdLevel:
    """Extra Rydberg manifold reached off-resonantly (detuning delta3 > 0)."""

    j3: HalfInt
    delta3_mhz: float
    optical: bool = True  # coupling laser also reaches r3 (same parity as target)

    def __post_init__(self):
        object.__setattr__(self, "j3", HalfInt.of(self.j3))
        if self.delta3_mhz <= 0:
            raise ValueError("delta3 must be positive")


@dataclass(frozen=True)
class LevelScheme:
    cls: TransitionClass
    j_intermediate: HalfInt = HalfInt(3)
    coupling_target: str = "r1"  # which Rydberg manifold the coupling laser drives
    third: ThirdLevel | None = None

    def __post_init__(self):
        object.__setattr__(self, "j_intermediate", HalfInt.of(self.j_intermediate))
        if self.coupling_target not in ("r1", "r2"):
            raise ValueError("coupling_target must be 'r1' or 'r2'")
        if self.third is not None:
            dj = abs(self.third.j3.twice - self.cls.J.twice)
            if dj > 2:
                raise ValueError("third level must be dipole-reachable from r1")

    @property
    def j_ground(self) -> HalfInt:
        return HalfInt(1)

    @property
    def n_states(self) -> int:
        n = 2 + (self.j_intermediate.twice + 1) + self.cls.dim
        if self.third is not None:
            n += self.third.j3.twice + 1
        return n

    def offsets(self) -> dict:
        ni = self.j_intermediate.twice + 1
        out = {"g": 0, "i": 2, "r1": 2 + ni, "r2": 2 + ni + self.cls.dim_r1}
        if self.third is not None:
            out["r3"] = 2 + ni + self.cls.dim
        return out


def scheme_for_class(cls: TransitionClass, third_delta3_mhz: float | None = None,
                     j3=None) -> LevelScheme:
    """Experiment-matching scheme: J=1/2 classes are laser-probed on r1
    (S-state), J=3/2 classes on r2 (D-state).  A third level defaults to
    J3 = J' + 1 one fine-structure partner up (the D5/2 next to a D3/2)."""
    target = "r1" if cls.J.twice == 1 else "r2"
    third = None
    if third_delta3_mhz is not None:
        if j3 is None:
            j3 = HalfInt(cls.J.twice + 2)
        third = ThirdLevel(HalfInt.of(j3), third_delta3_mhz)
    return LevelScheme(cls, HalfInt(3), target, third)


@dataclass(frozen=True)
class SimParams:
    omega_probe: float = 0.5
    omega_coupling: float = 4.0
    omega_rf: float = 40.0
    gamma_i: float = 6.07
    gamma_r: float = 0.1
    delta_probe: float = 0.0
    coupling_detuning_grid: tuple = field(
        default_factory=lambda: tuple(np.linspace(-60.0, 60.0, 241))
    )
    optics: OpticalConfig = field(default_factory=standard_optics)

    def __post_init__(self):
        for name in ("omega_probe", "omega_coupling", "omega_rf", "gamma_i", "gamma_r"):
            if getattr(self, name) < 0:
                raise ValueError("%s must be non-negative" % name)
        if self.gamma_i > 0 and self.omega_probe > self.gamma_i:
            warnings.warn(
                "omega_probe exceeds gamma_i; weak-probe response is nonlinear",
                stacklevel=2,
            )


def _we_block(j_upper: HalfInt, j_lower: HalfInt, components) -> np.ndarray:
    """Wigner-Eckart block <upper m'| sum_q c_q r_q |lower m>, reduced
    element folded into the Rabi scale."""
    c_minus, c_zero, c_plus = components
    amps = {-1: c_minus, 0: c_zero, 1: c_plus}
    nu, nl = j_upper.twice + 1, j_lower.twice + 1
    B = np.zeros((nu, nl), dtype=complex)
    for col, m2 in enumerate(range(-j_lower.twice, j_lower.twice + 1, 2)):
        for q in (-1, 0, 1):
            if abs(amps[q]) == 0.0:
                continue
            m2p = m2 + 2 * q
            if abs(m2p) > j_upper.twice:
                continue
            row = (m2p + j_upper.twice) // 2
            sign = -1 if ((j_upper.twice - m2p) // 2) % 2 else 1
            B[row, col] += amps[q] * sign * wigner3j(
                j_upper, HalfInt.of(1), j_lower, HalfInt(-m2p), q, HalfInt(m2)
            )
    return B


def build_hamiltonian(
    scheme: LevelScheme, params: SimParams, sop: RfSop | float, delta_c: float
) -> np.ndarray:
    """Rotating-frame, rotating-wave Hamiltonian (MHz) at one coupling
    detuning.  sop may be an RfSop or a phase angle."""
    if not isinstance(sop, RfSop):
        sop = sop_from_phi(float(sop))
    n = scheme.n_states
    off = scheme.offsets()
    ji = scheme.j_intermediate
    ni = ji.twice + 1
    H = np.zeros((n, n), dtype=complex)

    # diagonal: rotating-frame detunings
    dp, dc = params.delta_probe, delta_c
    for k in range(ni):
        H[off["i"] + k, off["i"] + k] = -dp
    for k in range(scheme.cls.dim):
        H[off["r1"] + k, off["r1"] + k] = -dp - dc
    if scheme.third is not None:
        n3 = scheme.third.j3.twice + 1
        for k in range(n3):
            H[off["r3"] + k, off["r3"] + k] = -dp - dc + scheme.third.delta3_mhz

    # probe g -> i: Wigner-Eckart block over the J_g = 1/2 ground doublet,
    # which lets circular beams optically pump the ground population and
    # reshape peak prominences the way a real vapor does
    cp = params.optics.probe_components()
    Bg = _we_block(ji, scheme.j_ground, cp)
    H[off["i"] : off["i"] + ni, 0:2] = params.omega_probe / 2.0 * Bg

    # coupling laser i -> target Rydberg manifold
    cc = params.optics.coupling_components()
    j_target = scheme.cls.J if scheme.coupling_target == "r1" else scheme.cls.j_prime
    Bt = _we_block(j_target, ji, cc)
    tgt = off[scheme.coupling_target]
    nt = j_target.twice + 1
    H[tgt : tgt + nt, off["i"] : off["i"] + ni] = params.omega_coupling / 2.0 * Bt

    # RF dressing r1 <-> r2 in the lab frame, where it interferes with the
    # optical channels; only the lower triangle is written here because the
    # whole matrix is Hermitized at the end
    rf_minus, rf_plus = sop.lab_spherical()
    lab = RfSop(rf_plus, rf_minus)
    rf = oracle_matrix(scheme.cls, lab).entries * (
        oracle_scale(scheme.cls) * params.omega_rf
    )
    H[off["r1"] : off["r1"] + scheme.cls.dim, off["r1"] : off["r1"] + scheme.cls.dim] += np.tril(rf, -1)

    if scheme.third is not None:
        j3 = scheme.third.j3
        n3 = j3.twice + 1
        # RF r1 <-> r3 (off-resonant by delta3, handled on the diagonal)
        p3 = (j3.twice - scheme.cls.J.twice) // 2
        cls3 = TransitionClass(scheme.cls.J, p3)
        b_plus, b_minus = _oracle_blocks(cls3)
        B3 = (rf_plus * b_plus + rf_minus * b_minus) * (
            oracle_scale(cls3) * params.omega_rf
        )
        H[off["r3"] : off["r3"] + n3, off["r1"] : off["r1"] + scheme.cls.dim_r1] = B3
        # coupling laser also reaches r3 when it shares the target's parity
        if scheme.third.optical and scheme.coupling_target == "r2":
            B3c = _we_block(j3, ji, cc)
            H[off["r3"] : off["r3"] + n3, off["i"] : off["i"] + ni] = (
                params.omega_coupling / 2.0 * B3c
            )

    H = H + H.conj().T - np.diag(np.diag(H).real)
    return H


def collapse_operators(scheme: LevelScheme, params: SimParams) -> list:
    """Decay channels back to the ground doublet.

    The intermediate manifold decays at total rate gamma_i with angular
    branching per photon polarization q (three separate Lindblad channels,
    so spontaneously emitted photons do not create ground coherences that
    a real vapor would not have).  Every Rydberg state decays at gamma_r,
    split evenly over the two ground substates.
    """
    n = scheme.n_states
    off = scheme.offsets()
    ji = scheme.j_intermediate
    jg = scheme.j_ground
    ni = ji.twice + 1
    ng = jg.twice + 1
    ops = []
    if params.gamma_i > 0:
        # branching weights: sum over m_g and q of the squared 3-j for a
        # fixed i substate is 1/(2 J_i + 1), so this scale gives each i
        # state total decay rate gamma_i
        scale = math.sqrt(params.gamma_i * (ji.twice + 1))
        for q in (-1, 0, 1):
            comp = [0.0, 0.0, 0.0]
            comp[q + 1] = 1.0
            Bq = _we_block(ji, jg, comp)  # i rows x g cols
            C = np.zeros((n, n), dtype=complex)
            C[off["g"] : off["g"] + ng, off["i"] : off["i"] + ni] = scale * Bq.conj().T
            ops.append(C)
    if params.gamma_r > 0:
        for k in range(off["r1"], n):
            for gk in range(ng):
                C = np.zeros((n, n))
                C[off["g"] + gk, k] = math.sqrt(params.gamma_r / ng)
                ops.append(C)
    return ops


def liouvillian(H: np.ndarray, collapse: list) -> np.ndarray:
    """Dense Lindblad generator acting on row-major vec(rho)."""
    n = H.shape[0]
    eye = np.eye(n)
    L = -1j * (np.kron(H, eye) - np.kron(eye, H.T))
    for C in collapse:
        CdC = C.conj().T @ C
        L += np.kron(C, C.conj())
        L -= 0.5 * (np.kron(CdC, eye) + np.kron(eye, CdC.T))
    return L


def steady_state(
    H: np.ndarray, collapse: list, check_unique: bool = False, null_tol: float = 1e-8
) -> np.ndarray:
    """Stationary density matrix of the Lindblad generator.

    Solves the vectorized linear system with one row replaced by the trace
    constraint; rho is returned Hermitized.
    """
    n = H.shape[0]
    L = liouvillian(H, collapse)
    if check_unique:
        sv = np.linalg.svd(L, compute_uv=False)
        scale = sv[0] if sv[0] > 0 else 1.0
        if np.sum(sv / scale < null_tol) > 1:
            raise NonUniqueSteadyState("Lindblad nullspace dimension exceeds 1")
    A = L.copy()
    b = np.zeros(n * n, dtype=complex)
    A[0, :] = 0.0
    A[0, :: n + 1] = 1.0  # trace row
    b[0] = 1.0
    rho = np.linalg.solve(A, b).reshape(n, n)
    rho = 0.5 * (rho + rho.conj().T)
    return rho


def lindblad_residual(H: np.ndarray, collapse: list, rho: np.ndarray) -> float:
    drho = -1j * (H @ rho - rho @ H)
    for C in collapse:
        CdC = C.conj().T @ C
        drho += C @ rho @ C.conj().T - 0.5 * (CdC @ rho + rho @ CdC)
    return float(np.linalg.norm(drho))


def _probe_weights(scheme: LevelScheme, params: SimParams) -> np.ndarray:
    """Amplitude block with which the probe drives g -> i, unit Frobenius
    norm, shape (n_i, n_g)."""
    cp = params.optics.probe_components()
    Bg = _we_block(scheme.j_intermediate, scheme.j_ground, cp)
    norm = np.linalg.norm(Bg)
    return Bg / norm if norm > 0 else Bg


def probe_absorption(scheme: LevelScheme, params: SimParams, rho: np.ndarray) -> float:
    """Probe attenuation observable: imaginary part of the ground to
    intermediate coherences projected on the probe coupling pattern."""
    off = scheme.offsets()
    ni = scheme.j_intermediate.twice + 1
    ng = scheme.j_ground.twice + 1
    W = _probe_weights(scheme, params)
    coh = rho[off["i"] : off["i"] + ni, off["g"] : off["g"] + ng]
    return float(-np.imag(np.sum(W.conj() * coh)))


@dataclass(frozen=True)
class EitSpectrum:
    phi: float | None
    detuning_mhz: np.ndarray
    response: np.ndarray


@dataclass(frozen=True)
class EitSpectrogram:
    phi_grid: np.ndarray
    detuning_mhz: np.ndarray
    response: np.ndarray  # shape (len(phi_grid), len(detuning_mhz))


def eit_spectrum(scheme: LevelScheme, params: SimParams, sop: RfSop | float) -> EitSpectrum:
    """Probe transparency vs coupling detuning for one SOP.

    The coupling detuning enters the Hamiltonian only on the Rydberg
    diagonal, so the Liouvillian is assembled once at Delta_c = 0 and each
    grid point just adds a diagonal shift before the linear solve.
    """
    if not isinstance(sop, RfSop):
        sop = sop_from_phi(float(sop))
    grid = np.asarray(params.coupling_detuning_grid, dtype=float)
    collapse = collapse_operators(scheme, params)
    dark = replace(params, omega_coupling=0.0)
    baseline = probe_absorption(
        scheme, dark, steady_state(build_hamiltonian(scheme, dark, sop, 0.0), collapse)
    )

    n = scheme.n_states
    L0 = liouvillian(build_hamiltonian(scheme, params, sop, 0.0), collapse)
    ryd = np.zeros(n)
    ryd[scheme.offsets()["r1"] :] = 1.0
    # dH/dDelta_c = -diag(ryd); its commutator contribution is diagonal in
    # the vectorized basis
    dshift = 1j * (np.repeat(ryd, n) - np.tile(ryd, n))
    b = np.zeros(n * n, dtype=complex)
    b[0] = 1.0
    trace_cols = np.arange(n) * (n + 1)

    def one(dc: float) -> float:
        A = L0 + np.diag(dc * dshift)
        A[0, :] = 0.0
        A[0, trace_cols] = 1.0
        rho = np.linalg.solve(A, b).reshape(n, n)
        rho = 0.5 * (rho + rho.conj().T)
        return probe_absorption(scheme, params, rho)

    workers = int(os.environ.get("RYDPOL_THREADS", "1") or "1")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            absorption = np.array(list(ex.map(one, grid)))
    else:
        absorption = np.array([one(dc) for dc in grid])
    response = np.clip(baseline - absorption, 0.0, None)
    return EitSpectrum(sop.phi, grid, response)


def eit_spectrogram(scheme: LevelScheme, params: SimParams, phi_grid) -> EitSpectrogram:
    phi_grid = np.asarray(phi_grid, dtype=float)
    rows = [eit_spectrum(scheme, params, float(phi)).response for phi in phi_grid]
    return EitSpectrogram(
        phi_grid,
        np.asarray(params.coupling_detuning_grid, dtype=float),
        np.vstack(rows),
    )


def third_level_sweep(
    scheme: LevelScheme, params: SimParams, delta3_list, phi_grid
) -> list:
    """One spectrogram per third-level offset; scheme.third must be set."""
    if scheme.third is None:
        raise ValueError("scheme has no third level")
    out = []
    for d3 in delta3_list:
        if d3 <= 0:
            raise ValueError("delta3 must be positive")
        s = replace(scheme, third=replace(scheme.third, delta3_mhz=float(d3)))
        out.append(eit_spectrogram(s, params, phi_grid))
    return out


def write_spectrogram_csv(path, spg: EitSpectrogram) -> None:
    with open(path, "w") as fh:
        fh.write("phi,delta_c_mhz,response\n")
        for i, phi in enumerate(spg.phi_grid):
            for j, dc in enumerate(spg.detuning_mhz):
                fh.write("%.9g,%.9g,%.9g\n" % (phi, dc, spg.response[i, j]))


def spectrogram_json_dict(spg: EitSpectrogram) -> dict:
    return {
        "phi": [float(v) for v in spg.phi_grid],
        "delta_c_mhz": [float(v) for v in spg.detuning_mhz],
        "response": [[float(v) for v in row] for row in spg.response],
    }


def scenario_from_dict(cfg: dict) -> tuple:
    """Parse a scenario config into (scheme, params, phi_grid).

    Schema: {"class": {"J2": int, "p": int}, "coupling_target"?: str,
    "third_level"?: {"J2": int, "delta3_mhz": float}, "params"?: {...},
    "optics"?: preset name or {"propagation_probe": [...], ...},
    "phi"?: {"start":., "stop":., "steps": n} or [values]}
    """
    errors = []
    try:
        cls = TransitionClass(HalfInt(int(cfg["class"]["J2"])), int(cfg["class"]["p"]))
    except (KeyError, ValueError, TypeError) as exc:
        errors.append("class: %s" % exc)
        cls = None

    third = None
    if cfg.get("third_level"):
        try:
            third = ThirdLevel(
                HalfInt(int(cfg["third_level"]["J2"])),
                float(cfg["third_level"]["delta3_mhz"]),
            )
        except (KeyError, ValueError, TypeError) as exc:
            errors.append("third_level: %s" % exc)

    optics_cfg = cfg.get("optics", "standard")
    try:
        if isinstance(optics_cfg, str):
            optics = OPTICS_PRESETS[optics_cfg]()
        else:
            optics = OpticalConfig(
                tuple(optics_cfg["propagation_probe"]),
                tuple(optics_cfg["propagation_coupling"]),
                tuple(complex(*v) if isinstance(v, list) else v for v in optics_cfg["pol_probe"]),
                tuple(complex(*v) if isinstance(v, list) else v for v in optics_cfg["pol_coupling"]),
            )
    except (KeyError, ValueError, TypeError) as exc:
        errors.append("optics: %s" % exc)
        optics = standard_optics()

    p = dict(cfg.get("params", {}))
    grid_cfg = p.pop("coupling_detuning_grid", None)
    try:
        kwargs = {k: float(v) for k, v in p.items()}
        if grid_cfg is not None:
            if isinstance(grid_cfg, dict):
                grid = tuple(
                    np.linspace(grid_cfg["start"], grid_cfg["stop"], int(grid_cfg["steps"]))
                )
            else:
                grid = tuple(float(v) for v in grid_cfg)
            kwargs["coupling_detuning_grid"] = grid
        params = SimParams(optics=optics, **kwargs)
    except (KeyError, ValueError, TypeError) as exc:
        errors.append("params: %s" % exc)
        params = None

    phi_cfg = cfg.get("phi", {"start": 0.0, "stop": 2 * math.pi, "steps": 32})
    try:
        if isinstance(phi_cfg, dict):
            phi_grid = np.linspace(phi_cfg["start"], phi_cfg["stop"], int(phi_cfg["steps"]))
        else:
            phi_grid = np.asarray([float(v) for v in phi_cfg])
    except (KeyError, ValueError, TypeError) as exc:
        errors.append("phi: %s" % exc)
        phi_grid = None

    if errors:
        raise ValueError("invalid scenario config: " + "; ".join(errors))

    target = cfg.get("coupling_target")
    if target is None:
        scheme = scheme_for_class(cls)
        if third is not None:
            scheme = replace(scheme, third=third)
    else:
        scheme = LevelScheme(cls, HalfInt(int(cfg.get("j_intermediate2", 3))), target, third)
    return scheme, params, phi_grid


def scenario_from_json(path) -> tuple:
    with open(path) as fh:
        return scenario_from_dict(json.load(fh))
