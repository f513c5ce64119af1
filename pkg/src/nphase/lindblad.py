"""Rotating-frame master equation for the coupling/probe/signal driven atom.

Basis order is (F=2, F=3, F=3', F=4').  User-facing frequencies are linear
MHz; everything is converted to angular units (rad/us) internally, so time
is measured in microseconds.

Superoperators act on column-major vectorized density matrices,
``vec(rho) = rho.reshape(-1, order="F")``, for which
``vec(A @ X @ B) = kron(B.T, A) @ vec(X)``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields

import numpy as np

from .exceptions import DegenerateSteadyState, NoDecay, StepTooLarge
from .spinspace import DensityMatrix, as_density_matrix

TWO_PI = 2 * math.pi
DIM = 4
G2, G3, E3, E4 = range(DIM)

# Rb D2 natural linewidth and the 85Rb F'=3 -> F'=4 splitting, in MHz.
DEFAULT_GAMMA = 6.07
DEFAULT_HF_SPLIT = 120.64
DEFAULT_BRANCH = 0.5

KERNEL_RTOL = 1e-9
COND_LIMIT = 1e12
RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class SystemParams:
    """Laser and atomic parameters of the four-level model, all in MHz.

    ``ground_dephasing`` is the decay rate of the F=2/F=3 coherence from an
    extra pure-dephasing channel; it is off (0) by default.
    """

    omega_23p: float
    omega_33p: float
    omega_34p: float = 0.0
    delta_p: float = 0.0
    delta_c: float = 0.0
    hf_split: float = DEFAULT_HF_SPLIT
    gamma_3p: float = DEFAULT_GAMMA
    gamma_4p: float = DEFAULT_GAMMA
    branch_3p_to_2: float = DEFAULT_BRANCH
    ground_dephasing: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not math.isfinite(value):
                raise ValueError(f"{f.name} must be finite, got {value!r}")
        for name in ("omega_23p", "omega_33p", "omega_34p", "gamma_3p", "gamma_4p", "ground_dephasing"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)!r}")
        if not 0.0 <= self.branch_3p_to_2 <= 1.0:
            raise ValueError(f"branch_3p_to_2 must lie in [0, 1], got {self.branch_3p_to_2!r}")
        if self.hf_split <= 0:
            raise ValueError(f"hf_split must be > 0, got {self.hf_split!r}")

    def replace(self, **changes) -> "SystemParams":
        return SystemParams(**{**asdict(self), **changes})

    def as_dict(self) -> dict:
        return asdict(self)


def build_hamiltonian(params: SystemParams) -> np.ndarray:
    """Rotating-frame Hamiltonian in rad/us.

    Both excited levels rotate at the probe frequency, which makes every
    coupling time independent and puts the F=3 level at the two-photon
    detuning.
    """
    p = params
    H = np.diag([0.0, -(p.delta_p - p.delta_c), -p.delta_p, p.hf_split - p.delta_p]).astype(complex)
    H[E3, G2] = H[G2, E3] = p.omega_23p / 2
    H[E3, G3] = H[G3, E3] = p.omega_33p / 2
    H[E4, G3] = H[G3, E4] = p.omega_34p / 2
    return TWO_PI * H


def jump_operators(params: SystemParams) -> list[np.ndarray]:
    """Collapse operators with nonzero rate (rates in rad/us)."""
    p = params
    ops = []

    def lower(to, frm, rate):
        if rate > 0:
            c = np.zeros((DIM, DIM), dtype=complex)
            c[to, frm] = math.sqrt(TWO_PI * rate)
            ops.append(c)

    lower(G2, E3, p.gamma_3p * p.branch_3p_to_2)
    lower(G3, E3, p.gamma_3p * (1 - p.branch_3p_to_2))
    # F'=4 -> F=2 is dipole forbidden
    lower(G3, E4, p.gamma_4p)
    if p.ground_dephasing > 0:
        c = np.zeros((DIM, DIM), dtype=complex)
        c[G3, G3] = math.sqrt(2 * TWO_PI * p.ground_dephasing)
        ops.append(c)
    return ops


def vec(rho) -> np.ndarray:
    return np.asarray(rho, dtype=complex).reshape(-1, order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    d = math.isqrt(v.size)
    return np.asarray(v).reshape(d, d, order="F")


@dataclass(frozen=True)
class Liouvillian:
    superop: np.ndarray

    def apply(self, rho) -> np.ndarray:
        return unvec(self.superop @ vec(rho))

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.superop, 2))


def build_liouvillian(params: SystemParams) -> Liouvillian:
    H = build_hamiltonian(params)
    eye = np.eye(DIM)
    L = -1j * (np.kron(eye, H) - np.kron(H.T, eye))
    for c in jump_operators(params):
        cdc = c.conj().T @ c
        L += np.kron(c.conj(), c) - 0.5 * (np.kron(eye, cdc) + np.kron(cdc.T, eye))
    L.setflags(write=False)
    return Liouvillian(L)


def _trace_row(d: int = DIM) -> np.ndarray:
    return np.eye(d).reshape(-1, order="F")


def kernel_dimension(liouv: Liouvillian, rtol: float = KERNEL_RTOL) -> int:
    s = np.linalg.svd(liouv.superop, compute_uv=False)
    return int(np.sum(s <= rtol * s[0]))


def steady_state(params: SystemParams) -> DensityMatrix:
    """Unique stationary state of the master equation.

    One row of the linear system is replaced by the trace condition; if that
    system is badly conditioned the null vector is taken from an SVD instead.
    """
    if params.gamma_3p == 0 and params.gamma_4p == 0 and params.ground_dephasing == 0:
        raise NoDecay("all decay rates are zero; the steady state is not unique")
    liouv = build_liouvillian(params)
    L = liouv.superop
    dim = kernel_dimension(liouv)
    if dim > 1:
        raise DegenerateSteadyState(dim)

    A = L.copy()
    A[0, :] = _trace_row()
    b = np.zeros(L.shape[0], dtype=complex)
    b[0] = 1.0
    v = None
    if np.linalg.cond(A) <= COND_LIMIT:
        v = np.linalg.solve(A, b)
    if v is None or np.linalg.norm(L @ v) > RESIDUAL_TOL:
        _, _, vh = np.linalg.svd(L)
        v = vh[-1].conj()
        v = v / (_trace_row() @ v)
    rho = unvec(v)
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.trace(rho).real
    return DensityMatrix(rho)


def _rk4_propagator(L: np.ndarray, h: float) -> np.ndarray:
    # one classical RK4 step of the linear ODE dv/dt = L v, as a matrix
    hL = h * L
    eye = np.eye(L.shape[0])
    return eye + hL @ (eye + hL @ (eye / 2 + hL @ (eye / 6 + hL / 24)))


def evolve(params: SystemParams, rho0, t_final: float, dt: float) -> DensityMatrix:
    """Integrate d(rho)/dt = L(rho) with fixed-step RK4 up to ``t_final`` (us).

    The step is shrunk so an integer number of steps lands on ``t_final``.
    """
    rho0 = as_density_matrix(rho0)
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    if t_final < 0:
        raise ValueError(f"t_final must be >= 0, got {t_final!r}")
    if t_final == 0:
        return rho0
    if t_final < dt:
        raise ValueError("t_final must be at least one step long")
    liouv = build_liouvillian(params)
    if liouv.norm * dt >= 0.1:
        raise StepTooLarge(f"||L|| * dt = {liouv.norm * dt:.3g} >= 0.1; reduce dt below {0.1 / liouv.norm:.3g} us")

    n_steps = math.ceil(t_final / dt - 1e-9)
    M = _rk4_propagator(liouv.superop, t_final / n_steps)
    rho = np.array(rho0.data)
    for _ in range(n_steps):
        rho = unvec(M @ vec(rho))
        rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(rho, check=False)


def max_stable_step(params: SystemParams, safety: float = 0.5) -> float:
    """Largest dt satisfying the RK4 stability bound, times ``safety``."""
    return safety * 0.1 / build_liouvillian(params).norm


def spectral_gap(params: SystemParams) -> float:
    """Smallest nonzero decay rate of the Liouvillian spectrum (1/us)."""
    ev = np.linalg.eigvals(build_liouvillian(params).superop)
    rates = np.sort(-ev.real)
    return float(rates[1])
