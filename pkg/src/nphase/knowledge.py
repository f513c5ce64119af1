"""Number and phase distributions of a density matrix and their knowledges.

Knowledge is the relative entropy (in bits) of a measurement distribution
with respect to the uniform one.  R_m refers to the Dicke-basis (number)
distribution, R_phi to the phase distribution of the coherent-state POVM.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .spinspace import DensityMatrix, PhaseKernel, as_density_matrix, phase_kernel

TWO_PI = 2 * math.pi
DEFAULT_N_GRID = 2048
P_FLOOR = 1e-14


def _validate_grid(n_grid: int) -> int:
    n_grid = int(n_grid)
    if n_grid < 256 or n_grid & (n_grid - 1):
        raise ValueError(f"n_grid must be a power of two >= 256, got {n_grid}")
    return n_grid


def phase_grid(n_grid: int) -> np.ndarray:
    """Uniform periodic grid on [0, 2 pi), endpoint excluded."""
    return TWO_PI * np.arange(n_grid) / n_grid


@dataclass(frozen=True)
class PhaseDistribution:
    """P(phi) = sum_k fourier[k + d - 1] * exp(i k phi), k = -(d-1)..(d-1)."""

    fourier: np.ndarray = field(repr=False)

    @property
    def max_order(self) -> int:
        return (self.fourier.size - 1) // 2

    def __call__(self, phi) -> np.ndarray:
        phi = np.asarray(phi, dtype=float)
        K = self.max_order
        ks = np.arange(1, K + 1)
        pos = self.fourier[K + 1:]
        vals = self.fourier[K].real + 2 * np.real(np.exp(1j * np.multiply.outer(phi, ks)) @ pos)
        return vals

    def grid(self, n_grid: int = DEFAULT_N_GRID) -> tuple[np.ndarray, np.ndarray]:
        phi = phase_grid(n_grid)
        return phi, self(phi)


def number_distribution(rho) -> np.ndarray:
    rho = np.asarray(rho)
    p = np.real(np.diag(rho)).copy()
    p[p < 0] = 0.0  # roundoff only
    return p / p.sum()


def _relative_entropy_bits(p: np.ndarray, d: int) -> float:
    p = p[p > 0]
    return float(np.sum(p * np.log2(d * p)))


def knowledge_number(p) -> float:
    """R_m = sum_m p(m) log2(d p(m)), with 0 log 0 = 0."""
    p = np.asarray(p, dtype=float)
    return _relative_entropy_bits(p, p.size)


def _fourier_coefficients(rho: np.ndarray, kernel: PhaseKernel) -> np.ndarray:
    d = kernel.dim
    weighted = rho * kernel.K * kernel.prefactor
    # n - m = k collects the k-th sub-diagonal
    return np.array([np.trace(weighted, offset=-k) for k in range(-(d - 1), d)])


def phase_distribution(rho, kernel: PhaseKernel | None = None) -> PhaseDistribution:
    rho = as_density_matrix(rho)
    if kernel is None:
        kernel = phase_kernel(rho.j)
    if kernel.dim != rho.dim:
        raise ValueError(f"kernel is for d={kernel.dim}, state has d={rho.dim}")
    return PhaseDistribution(_fourier_coefficients(rho.data, kernel))


def _phase_entropy_on_grid(P: np.ndarray) -> float:
    # trapezoid on a periodic grid == mean times period
    keep = P > P_FLOOR
    log_term = np.log2(TWO_PI * P, out=np.zeros_like(P), where=keep)
    return float(TWO_PI * np.dot(P, log_term) / P.size)


def knowledge_phase(P: PhaseDistribution, n_grid: int = DEFAULT_N_GRID) -> float:
    """R_phi = int_0^{2pi} P log2(2 pi P) dphi by the periodic trapezoid rule."""
    _, values = P.grid(_validate_grid(n_grid))
    return _phase_entropy_on_grid(values)


def mixedness(rho) -> float:
    rho = np.asarray(rho)
    return float(1.0 - np.real(np.vdot(rho, rho)))


@dataclass(frozen=True)
class KnowledgeReport:
    r_m: float
    r_phi: float
    mixedness: float
    populations: tuple[float, ...]


def knowledge_report(rho, n_grid: int = DEFAULT_N_GRID) -> KnowledgeReport:
    rho = as_density_matrix(rho)
    p = number_distribution(rho)
    return KnowledgeReport(
        r_m=knowledge_number(p),
        r_phi=knowledge_phase(phase_distribution(rho), n_grid),
        mixedness=mixedness(rho),
        populations=tuple(float(x) for x in p),
    )


class PureStateKnowledge:
    """Fast (R_m, R_phi) evaluation for pure states on a fixed phase grid.

    Used in optimizer inner loops; agrees with ``knowledge_report`` on the
    same grid to roundoff.
    """

    def __init__(self, j: float = 1.5, n_grid: int = DEFAULT_N_GRID):
        self.kernel = phase_kernel(j)
        self.n_grid = _validate_grid(n_grid)
        d = self.kernel.dim
        # W[k-1] @ vec(rho) is the k-th Fourier coefficient, k = 1..d-1
        W = np.zeros((d - 1, d * d))
        for a in range(d):
            for b in range(a):
                W[a - b - 1, a * d + b] = self.kernel.prefactor * self.kernel.K[a, b]
        self._weights = W
        kphi = np.outer(np.arange(1, d), phase_grid(self.n_grid))
        # P = a0 + 2 Re(a_k) cos(k phi) - 2 Im(a_k) sin(k phi)
        self._basis = np.vstack([2 * np.cos(kphi), -2 * np.sin(kphi)])
        self._a0 = 1 / TWO_PI

    def __call__(self, psi: np.ndarray) -> tuple[float, float]:
        psi = psi / np.linalg.norm(psi)
        coeffs = self._weights @ np.outer(psi, psi.conj()).ravel()
        P = self._a0 + np.concatenate((coeffs.real, coeffs.imag)) @ self._basis
        return knowledge_number(np.abs(psi) ** 2), _phase_entropy_on_grid(P)
