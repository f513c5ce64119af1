"""Weighted entropic uncertainty relation mu2 * R_phi + R_m <= log2(d).

The largest admissible weight mu2 is the infimum of (log2 d - R_m) / R_phi
over states with nonvanishing phase knowledge.  Both knowledges are convex
in rho, so the weighted sum is maximized on pure states and the search runs
over pure states only.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .exceptions import NoInteriorState
from .knowledge import DEFAULT_N_GRID, PureStateKnowledge, knowledge_report

R_PHI_FLOOR = 1e-6
_PENALTY = 1e6


def uncertainty_sum(rho, mu2: float, n_grid: int = DEFAULT_N_GRID) -> float:
    if mu2 < 0:
        raise ValueError(f"mu2 must be >= 0, got {mu2!r}")
    rep = knowledge_report(rho, n_grid)
    return mu2 * rep.r_phi + rep.r_m


def convex_form(mu2: float) -> tuple[float, float]:
    """Weights (p, c) of the equivalent relation p R_phi + (1 - p) R_m < c."""
    if mu2 < 0:
        raise ValueError(f"mu2 must be >= 0, got {mu2!r}")
    return mu2 / (1 + mu2), 2 / (1 + mu2)


def state_from_angles(x: np.ndarray) -> np.ndarray:
    """Map 6 reals to a unit vector in C^4 with a real, nonnegative-phase first entry.

    x[:3] are hyperspherical magnitude angles and x[3:] relative phases.
    """
    a, b, c = x[:3]
    sa, sb = math.sin(a), math.sin(b)
    mags = np.array([math.cos(a), sa * math.cos(b), sa * sb * math.cos(c), sa * sb * math.sin(c)])
    phases = np.exp(1j * np.concatenate(([0.0], x[3:])))
    return mags * phases


def angles_from_state(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    psi = psi * np.exp(-1j * np.angle(psi[0]))
    r = np.abs(psi)
    a = math.acos(min(1.0, r[0]))
    b = math.atan2(math.hypot(r[2], r[3]), r[1])
    c = math.atan2(r[3], r[2])
    return np.array([a, b, c, *np.angle(psi[1:])])


def haar_state(rng: np.random.Generator, d: int = 4) -> np.ndarray:
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return z / np.linalg.norm(z)


class _Objective:
    """(log2 d - R_m) / R_phi on the angle parameterization."""

    def __init__(self, n_grid: int):
        self.knowledge = PureStateKnowledge(1.5, n_grid)

    def terms(self, x):
        return self.knowledge(state_from_angles(x))

    def __call__(self, x) -> float:
        r_m, r_phi = self.terms(x)
        if r_phi <= R_PHI_FLOOR:
            return _PENALTY
        return (2.0 - r_m) / r_phi


@dataclass(frozen=True)
class Mu2Result:
    mu2: float
    argmin_state: np.ndarray = field(repr=False)
    r_phi_at_min: float
    r_m_at_min: float
    n_starts: int
    seed: int


def _local_search(args):
    start_seed, tol, n_grid = args
    rng = np.random.default_rng(start_seed)
    obj = _Objective(n_grid)
    for _ in range(100):
        x0 = angles_from_state(haar_state(rng))
        if obj.terms(x0)[1] > R_PHI_FLOOR:
            break
    else:
        return None
    res = minimize(obj, x0, method="Nelder-Mead",
                   options={"xatol": 1e-6, "fatol": tol, "maxiter": 4000, "adaptive": True})
    return float(res.fun), np.asarray(res.x)


def find_mu2(n_starts: int = 200, seed: int = 42, tol: float = 1e-5,
             n_grid: int = DEFAULT_N_GRID, n_jobs: int = 1) -> Mu2Result:
    """Multi-start Nelder-Mead search for the largest admissible mu2.

    Start k draws from ``SeedSequence(seed).spawn(n_starts)[k]``, so the
    result does not depend on ``n_jobs``.  The best local minimum is
    polished by a final restart from its own solution.
    """
    if n_starts < 50:
        raise ValueError(f"n_starts must be >= 50, got {n_starts}")
    seeds = np.random.SeedSequence(seed).spawn(n_starts)
    tasks = [(s, tol, n_grid) for s in seeds]
    if n_jobs == 1:
        outcomes = [_local_search(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            outcomes = list(pool.map(_local_search, tasks, chunksize=max(1, n_starts // (4 * n_jobs))))
    outcomes = [o for o in outcomes if o is not None and o[0] < _PENALTY]
    if not outcomes:
        raise NoInteriorState("no start had phase knowledge above the exclusion floor")
    # ties keep the earliest start, which keeps the reduction order independent
    best_x = min(outcomes, key=lambda o: o[0])[1]

    obj = _Objective(n_grid)
    res = minimize(obj, best_x, method="Nelder-Mead",
                   options={"xatol": 1e-9, "fatol": tol * 1e-3, "maxiter": 4000, "adaptive": True})
    if res.fun < obj(best_x):
        best_x = np.asarray(res.x)
    psi = state_from_angles(best_x)
    r_m, r_phi = obj.terms(best_x)
    return Mu2Result(
        mu2=(2.0 - r_m) / r_phi,
        argmin_state=psi,
        r_phi_at_min=r_phi,
        r_m_at_min=r_m,
        n_starts=n_starts,
        seed=seed,
    )


def max_phase_knowledge(n_starts: int = 20, seed: int = 0,
                        n_grid: int = DEFAULT_N_GRID) -> tuple[np.ndarray, float, float]:
    """Pure state with the largest R_phi; returns (state, R_phi, R_m)."""
    knowledge = PureStateKnowledge(1.5, n_grid)
    rng = np.random.default_rng(seed)

    def neg(x):
        return -knowledge(state_from_angles(x))[1]

    best = None
    for _ in range(n_starts):
        res = minimize(neg, angles_from_state(haar_state(rng)), method="Nelder-Mead",
                       options={"xatol": 1e-8, "fatol": 1e-10, "maxiter": 4000, "adaptive": True})
        if best is None or res.fun < best.fun:
            best = res
    psi = state_from_angles(best.x)
    r_m, r_phi = knowledge(psi)
    return psi, r_phi, r_m
