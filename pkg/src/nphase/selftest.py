"""Fast invariant checks run by ``nphase selftest``."""
from __future__ import annotations

import math
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .complementarity import convex_form, haar_state
from .knowledge import knowledge_phase, knowledge_report, number_distribution, phase_distribution
from .lindblad import SystemParams, build_liouvillian, steady_state, vec
from .spinspace import DensityMatrix, coherent_amplitudes, make_pure, phase_kernel

TWO_PI = 2 * math.pi


def random_params(rng: np.random.Generator, **fixed) -> SystemParams:
    """Draw a physically reasonable parameter point (MHz)."""
    draw = dict(
        omega_23p=rng.uniform(0.5, 10.0),
        omega_33p=rng.uniform(0.5, 10.0),
        omega_34p=rng.uniform(0.0, 10.0),
        delta_p=rng.uniform(-20.0, 20.0),
        delta_c=rng.uniform(-20.0, 20.0),
        gamma_3p=rng.uniform(3.0, 10.0),
        gamma_4p=rng.uniform(3.0, 10.0),
        branch_3p_to_2=rng.uniform(0.2, 0.8),
    )
    draw.update(fixed)
    return SystemParams(**draw)


def random_mixed_state(rng: np.random.Generator, d: int = 4, rank: int | None = None) -> DensityMatrix:
    rank = rank or int(rng.integers(1, d + 1))
    w = rng.dirichlet(np.ones(rank))
    rho = sum(wi * np.outer(psi, psi.conj()) for wi, psi in zip(w, (haar_state(rng, d) for _ in range(rank))))
    return DensityMatrix(rho / np.trace(rho).real)


def kernel_by_quadrature(j: float, a: int, b: int) -> float:
    def integrand(t):
        amps = np.abs(coherent_amplitudes(j, t, 0.0))
        return math.sin(t) * amps[a] * amps[b]

    return quad(integrand, 0.0, math.pi, epsabs=1e-13, epsrel=1e-13)[0]


def _check_kernel():
    worst = 0.0
    for tj in range(1, 8):
        K = phase_kernel(tj / 2).K
        for a in range(tj + 1):
            for b in range(a, tj + 1):
                worst = max(worst, abs(K[a, b] - kernel_by_quadrature(tj / 2, a, b)))
    return worst <= 1e-10, f"max |K - quadrature| = {worst:.2e}"


def _check_wigner_dicke():
    phi = np.linspace(0, TWO_PI, 257)
    worst_p, worst_r = 0.0, 0.0
    for a in range(4):
        P = phase_distribution(make_pure(np.eye(4)[a]))
        worst_p = max(worst_p, np.max(np.abs(P(phi) - 1 / TWO_PI)))
        worst_r = max(worst_r, abs(knowledge_phase(P)))
    return worst_p <= 1e-12 and worst_r <= 1e-10, f"max|P - 1/2pi| = {worst_p:.1e}, max R_phi = {worst_r:.1e}"


def _check_liouvillian(rng):
    worst_tr, worst_h = 0.0, 0.0
    row = np.eye(4).reshape(-1, order="F")
    for _ in range(20):
        L = build_liouvillian(random_params(rng)).superop
        worst_tr = max(worst_tr, np.max(np.abs(row @ L)))
        X = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        X = X + X.conj().T
        Y = (L @ vec(X)).reshape(4, 4, order="F")
        worst_h = max(worst_h, np.max(np.abs(Y - Y.conj().T)))
    return worst_tr <= 1e-10 and worst_h <= 1e-10, f"trace row {worst_tr:.1e}, hermiticity {worst_h:.1e}"


def _check_steady_states(rng):
    worst_res, worst_eig, worst_tr = 0.0, 0.0, 0.0
    for _ in range(20):
        p = random_params(rng)
        rho = steady_state(p)
        L = build_liouvillian(p).superop
        worst_res = max(worst_res, np.linalg.norm(L @ vec(rho)))
        worst_eig = min(worst_eig, np.linalg.eigvalsh(rho.data)[0])
        worst_tr = max(worst_tr, abs(np.trace(rho.data).real - 1))
    ok = worst_res <= 1e-9 and worst_eig >= -1e-10 and worst_tr <= 1e-12
    return ok, f"residual {worst_res:.1e}, min eig {worst_eig:.1e}, trace err {worst_tr:.1e}"


def _check_dark_state(rng):
    worst = 0.0
    for _ in range(10):
        d = rng.uniform(-5, 5)
        p = random_params(rng, omega_34p=0.0, delta_p=d, delta_c=d)
        rep = knowledge_report(steady_state(p))
        s = p.omega_33p ** 2 + p.omega_23p ** 2
        expect = np.array([p.omega_33p ** 2, p.omega_23p ** 2, 0, 0]) / s
        worst = max(worst, rep.mixedness, np.max(np.abs(np.array(rep.populations) - expect)))
    return worst <= 1e-6, f"max deviation from pure dark state {worst:.1e}"


def _check_dephasing(rng):
    worst = 0.0
    for _ in range(20):
        rho = random_mixed_state(rng)
        diag = DensityMatrix(np.diag(np.diag(rho.data)))
        if not np.array_equal(number_distribution(rho), number_distribution(diag)):
            return False, "dephasing changed the number distribution"
        worst = max(worst, knowledge_phase(phase_distribution(diag)))
    return worst <= 1e-10, f"max R_phi of dephased states {worst:.1e}"


def _check_normalization(rng):
    worst = 0.0
    for _ in range(20):
        P = phase_distribution(random_mixed_state(rng))
        _, vals = P.grid(1024)
        worst = max(worst, abs(TWO_PI * vals.mean() - 1))
    return worst <= 1e-10, f"max |int P - 1| = {worst:.1e}"


def _check_convex_form():
    p, c = convex_form(1.973)
    return (round(p, 2), round(c, 2)) == (0.66, 0.67), f"p = {p:.4f}, c = {c:.4f}"


def checks(seed: int = 1234) -> list[tuple[str, Callable[[], tuple[bool, str]]]]:
    rng = np.random.default_rng(seed)
    return [
        ("phase kernel matches theta quadrature (j <= 7/2)", _check_kernel),
        ("Wigner-Dicke states have flat phase", _check_wigner_dicke),
        ("Liouvillian preserves trace and Hermiticity", lambda: _check_liouvillian(rng)),
        ("steady states are valid density matrices", lambda: _check_steady_states(rng)),
        ("two-photon resonance gives the pure dark state", lambda: _check_dark_state(rng)),
        ("dephasing removes phase knowledge only", lambda: _check_dephasing(rng)),
        ("phase distribution is normalized", lambda: _check_normalization(rng)),
        ("convex form of mu2 = 1.973", _check_convex_form),
    ]


def run(echo=print) -> bool:
    all_ok = True
    for name, fn in checks():
        try:
            ok, detail = fn()
        except Exception as exc:  # report, keep going
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        all_ok &= ok
        echo(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return all_ok
