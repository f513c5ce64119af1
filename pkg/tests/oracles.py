"""Brute-force reference computations, independent of the closed-form kernel."""
import math

import numpy as np
from scipy.integrate import quad


def ket_coefficient(j, m, theta, phi):
    """Expansion coefficient of |theta, phi> on |j, m>, straight from the definition."""
    k = round(j + m)
    n = round(2 * j)
    return (math.sqrt(math.comb(n, k)) * math.sin(theta / 2) ** k
            * math.cos(theta / 2) ** (n - k) * np.exp(-1j * k * phi))


def q_function(rho, theta, phi):
    rho = np.asarray(rho)
    j = (rho.shape[0] - 1) / 2
    c = np.array([ket_coefficient(j, k - j, theta, phi) for k in range(rho.shape[0])])
    return float(np.real(c.conj() @ rho @ c))


def phase_density_by_quadrature(rho, phi):
    """P(phi) = (2j+1)/(4 pi) int_0^pi sin(theta) Q(theta, phi) dtheta, by adaptive quadrature."""
    d = np.asarray(rho).shape[0]
    val = quad(lambda t: math.sin(t) * q_function(rho, t, phi), 0.0, math.pi, epsabs=1e-14, epsrel=1e-13)[0]
    return d / (4 * math.pi) * val


def kernel_entry_by_quadrature(j, a, b):
    def f(t):
        return math.sin(t) * abs(ket_coefficient(j, a - j, t, 0.0)) * abs(ket_coefficient(j, b - j, t, 0.0))

    return quad(f, 0.0, math.pi, epsabs=1e-14, epsrel=1e-13)[0]


def phase_knowledge_by_quadrature(density):
    """int_0^{2pi} P log2(2 pi P) dphi for a callable density, by adaptive quadrature."""
    def f(phi):
        p = density(phi)
        return p * math.log2(2 * math.pi * p) if p > 0 else 0.0

    return quad(f, 0.0, 2 * math.pi, epsabs=1e-13, epsrel=1e-12, limit=200)[0]


def trace_distance(a, b):
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(np.asarray(a) - np.asarray(b)))))
