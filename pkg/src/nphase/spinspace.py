"""Pseudospin basis, atomic coherent states and the closed-form phase kernel.

The four atomic levels F=2, F=3, F=3', F=4' are identified with the Dicke
states m = -3/2, -1/2, +1/2, +3/2 of a spin j = 3/2.  Array index ``a``
always corresponds to ``m = -j + a``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .exceptions import InvalidStateError

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-12
PSD_TOL = 1e-10


def _twice(j: float) -> int:
    """Return 2j as an int, rejecting anything that is not a positive half-integer."""
    tj = round(2 * float(j))
    if tj < 1 or abs(2 * float(j) - tj) > 1e-12:
        raise ValueError(f"j must be a positive half-integer, got {j!r}")
    return tj


@dataclass(frozen=True)
class SpinBasis:
    j: float
    level_map: tuple[str, ...]

    def __post_init__(self):
        tj = _twice(self.j)
        if len(self.level_map) != tj + 1:
            raise ValueError("level_map must name every Dicke level")
        if len(set(self.level_map)) != len(self.level_map):
            raise ValueError("level_map labels must be distinct")

    @property
    def dim(self) -> int:
        return _twice(self.j) + 1

    @property
    def m_values(self) -> np.ndarray:
        return np.arange(self.dim) - self.j

    def index(self, label: str) -> int:
        return self.level_map.index(label)


FOUR_LEVEL = SpinBasis(1.5, ("F=2", "F=3", "F=3'", "F=4'"))


class DensityMatrix:
    """Immutable d x d density matrix in the Dicke basis.

    The input is checked for Hermiticity, unit trace and positivity, then
    stored as its exact Hermitian part.  Instances convert to numpy arrays
    through ``np.asarray``.
    """

    __slots__ = ("_data",)

    def __init__(self, elements, *, check: bool = True):
        rho = np.array(elements, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] < 2:
            raise InvalidStateError(f"expected a square matrix, got shape {rho.shape}")
        if check:
            herm_err = np.max(np.abs(rho - rho.conj().T))
            if herm_err > HERMITIAN_TOL:
                raise InvalidStateError(f"matrix is not Hermitian (error {herm_err:.3g})")
        rho = 0.5 * (rho + rho.conj().T)
        if check:
            tr = np.trace(rho).real
            if abs(tr - 1.0) > TRACE_TOL:
                raise InvalidStateError(f"trace is {tr!r}, expected 1")
            lam = np.linalg.eigvalsh(rho)[0]
            if lam < -PSD_TOL:
                raise InvalidStateError(f"matrix is not positive semidefinite (min eigenvalue {lam:.3g})")
        rho.setflags(write=False)
        self._data = rho

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def dim(self) -> int:
        return self._data.shape[0]

    @property
    def j(self) -> float:
        return (self.dim - 1) / 2

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._data
        return self._data.astype(dtype)

    def __getitem__(self, idx):
        return self._data[idx]

    def __repr__(self):
        return f"DensityMatrix({np.array2string(self._data, precision=4)})"


def as_density_matrix(rho) -> DensityMatrix:
    if isinstance(rho, DensityMatrix):
        return rho
    return DensityMatrix(rho)


def make_pure(amplitudes) -> DensityMatrix:
    """Normalize ``amplitudes`` and return the projector onto that state."""
    psi = np.asarray(amplitudes, dtype=complex).ravel()
    norm = np.linalg.norm(psi)
    if norm == 0.0:
        raise InvalidStateError("cannot build a state from the zero vector")
    psi = psi / norm
    return DensityMatrix(np.outer(psi, psi.conj()))


def coherent_amplitude(j: float, m: float, theta: float, phi: float) -> complex:
    """Overlap <theta, phi | j, m> of an atomic coherent state with a Dicke state.

    This is the complex conjugate of the expansion coefficient of
    |theta, phi>, so the phase factor is exp(+i (j + m) phi).
    """
    tj = _twice(j)
    k = float(j) + float(m)  # j + m, number of "excitations"
    ki = round(k)
    if abs(k - ki) > 1e-12 or not 0 <= ki <= tj:
        raise ValueError(f"m={m!r} is not a Dicke label for j={j!r}")
    if not 0.0 <= theta <= math.pi:
        raise ValueError(f"theta must lie in [0, pi], got {theta!r}")
    mag = math.sqrt(math.comb(tj, ki)) * math.sin(theta / 2) ** ki * math.cos(theta / 2) ** (tj - ki)
    return complex(mag * np.exp(1j * ki * phi))


def coherent_amplitudes(j: float, theta: float, phi: float) -> np.ndarray:
    """All overlaps <theta, phi | j, m> for m = -j..j, in basis order."""
    tj = _twice(j)
    return np.array([coherent_amplitude(j, k - j, theta, phi) for k in range(tj + 1)])


def _log_beta(a: float, b: float) -> float:
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


@dataclass(frozen=True)
class PhaseKernel:
    """Symmetric table K[n, m] = int_0^pi sin(t) |<t,phi|n>| |<t,phi|m>| dt.

    With it, P(phi) = (2j+1)/(4 pi) * sum_{n,m} rho[n, m] K[n, m] exp(i (n - m) phi).
    """

    j: float
    K: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.K.shape[0]

    @property
    def prefactor(self) -> float:
        return self.dim / (4 * math.pi)


@lru_cache(maxsize=None)
def _kernel_table(tj: int) -> np.ndarray:
    j = tj / 2
    d = tj + 1
    K = np.empty((d, d))
    for a in range(d):
        for b in range(a, d):
            # substitute u = sin^2(theta/2): sin(theta) dtheta = 2 du
            s = (a + b) / 2  # j + (n+m)/2
            log_binom = 0.5 * (math.log(math.comb(tj, a)) + math.log(math.comb(tj, b)))
            K[a, b] = K[b, a] = 2.0 * math.exp(log_binom + _log_beta(s + 1, 2 * j - s + 1))
    K.setflags(write=False)
    return K


def phase_kernel(j: float) -> PhaseKernel:
    tj = _twice(j)
    return PhaseKernel(tj / 2, _kernel_table(tj))
