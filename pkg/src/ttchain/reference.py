"""Ground-truth oracles: dense quantum propagation, classical phonon dynamics,
and the analytic infinite-chain exciton solution.

The dense Hamiltonian here is assembled term by term with Kronecker embeddings,
deliberately independent of the SLIM/MPO route, so the two constructions check
each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import jv

from .hamiltonian import (
    COUPLED,
    EXCITON,
    PHONON,
    ChainParameters,
    ModelError,
    effective_frequencies,
    ladder_matrices,
)

DENSE_DIM_CAP = 4096


class OracleError(ValueError):
    """Raised when a reference computation is invalid for the given system."""


# ---------------------------------------------------------------------------
# dense quantum oracle

def _embed(factors: dict, n_sites: int, d: int) -> np.ndarray:
    out = None
    eye = np.eye(d)
    for i in range(n_sites):
        m = factors.get(i, eye)
        out = m if out is None else np.kron(out, m)
    return out


def dense_hamiltonian(params: ChainParameters) -> np.ndarray:
    """Direct kron-product assembly of the chain Hamiltonian (D <= 4096)."""
    dim = params.total_dim
    if dim > DENSE_DIM_CAP:
        raise OracleError(
            f"system too large for dense oracle: D = {dim} > {DENSE_DIM_CAP}")
    n = params.n_sites
    d = params.local_dim

    if params.has_exciton:
        br, bl = ladder_matrices(params.d_ex)
        if params.kind == COUPLED:
            eye_ph = np.eye(params.d_ph)
            br, bl = np.kron(br, eye_ph), np.kron(bl, eye_ph)
        n_ex = br @ bl
    if params.has_phonon:
        cr, cl = ladder_matrices(params.d_ph)
        q = cr + cl
        num = cr @ cl
        if params.kind == COUPLED:
            eye_ex = np.eye(params.d_ex)
            q, num = np.kron(eye_ex, q), np.kron(eye_ex, num)
        freqs = effective_frequencies(params)

    h = np.zeros((dim, dim))
    for i in range(n):
        if params.has_exciton:
            h += params.alpha * _embed({i: n_ex}, n, d)
        if params.has_phonon:
            h += freqs.nu_tilde[i] * _embed({i: num + 0.5 * np.eye(d)}, n, d)
    for i in range(n - 1):
        if params.has_exciton:
            h += params.beta * _embed({i: br, i + 1: bl}, n, d)
            h += params.beta * _embed({i: bl, i + 1: br}, n, d)
        if params.has_phonon:
            h += -freqs.omega_tilde[i] * _embed({i: q, i + 1: q}, n, d)
        if params.kind == COUPLED:
            h += freqs.sigma_bar[i] * _embed({i: n_ex, i + 1: q}, n, d)
            h += -freqs.sigma_barbar[i + 1] * _embed({i: q, i + 1: n_ex}, n, d)
    return h


class DensePropagator:
    """exp(-i t H) applied through one cached eigendecomposition of Hermitian H."""

    def __init__(self, h: np.ndarray):
        if not np.allclose(h, h.conj().T, atol=1e-12):
            raise OracleError("dense propagator needs a Hermitian matrix")
        self.eigenvalues, self.eigenvectors = np.linalg.eigh(h)
        self._real_basis = not np.iscomplexobj(self.eigenvectors)

    def _basis_matvec(self, m: np.ndarray, v: np.ndarray) -> np.ndarray:
        # keep the real eigenvector matrix real: two real gemvs beat one
        # implicit complex promotion copy of the full basis
        if self._real_basis and np.iscomplexobj(v):
            return m @ v.real + 1j * (m @ v.imag)
        return m @ v

    def propagate(self, psi0: np.ndarray, t: float) -> np.ndarray:
        c = self._basis_matvec(self.eigenvectors.T, np.asarray(psi0, dtype=complex))
        return self._basis_matvec(self.eigenvectors, np.exp(-1j * t * self.eigenvalues) * c)


def dense_propagate(psi0: np.ndarray, h: np.ndarray, t: float) -> np.ndarray:
    """One-shot semi-analytic solution psi(t) = exp(-i t H) psi0."""
    return DensePropagator(h).propagate(np.asarray(psi0, dtype=complex), t)


# ---------------------------------------------------------------------------
# classical symplectic oracle

@dataclass
class ClassicalPhasePoint:
    """Displacements and conjugate momenta of the N oscillators."""

    positions: np.ndarray
    momenta: np.ndarray

    def __post_init__(self):
        self.positions = np.asarray(self.positions, dtype=float)
        self.momenta = np.asarray(self.momenta, dtype=float)
        if self.positions.shape != self.momenta.shape or self.positions.ndim != 1:
            raise OracleError("positions/momenta must be equal-length vectors")
        if not (np.all(np.isfinite(self.positions)) and np.all(np.isfinite(self.momenta))):
            raise OracleError("phase-space point must be finite")


def force_constant_matrix(params: ChainParameters) -> np.ndarray:
    """Hessian of the harmonic chain potential with respect to the displacements."""
    if not params.has_phonon:
        raise OracleError(f"no phonons in a {params.kind} chain")
    n = params.n_sites
    m, nu, om = params.mass, params.nu, params.omega
    mu = 0.5 * m
    k = np.zeros((n, n))
    for i in range(n):
        k[i, i] += m * nu ** 2
    for i in range(n - 1):
        k[i, i] += mu * om ** 2
        k[i + 1, i + 1] += mu * om ** 2
        k[i, i + 1] -= mu * om ** 2
        k[i + 1, i] -= mu * om ** 2
    return k


def classical_propagate(x0: ClassicalPhasePoint, params: ChainParameters,
                        t: float) -> ClassicalPhasePoint:
    """Exact phase-space flow of the quadratic chain via normal modes.

    Hamilton's equations dR/dt = P/m, dP/dt = -K R are diagonalized in
    mass-weighted coordinates; each normal mode is a closed-form harmonic
    oscillator, so arbitrary times cost one small eigendecomposition.
    """
    n = params.n_sites
    if len(x0.positions) != n:
        raise OracleError(f"phase point has {len(x0.positions)} sites, expected {n}")
    m = params.mass
    k = force_constant_matrix(params)
    k_tilde = k / m                         # mass-weighted, symmetric for equal masses
    evals, modes = np.linalg.eigh(k_tilde)
    q0 = modes.T @ (math.sqrt(m) * x0.positions)
    p0 = modes.T @ (x0.momenta / math.sqrt(m))
    qt = np.empty(n)
    pt = np.empty(n)
    for j in range(n):
        lam = evals[j]
        if lam > 1e-300:
            w = math.sqrt(lam)
            c, s = math.cos(w * t), math.sin(w * t)
            qt[j] = q0[j] * c + p0[j] * s / w
            pt[j] = -q0[j] * w * s + p0[j] * c
        else:                               # free mode (absent for nu > 0)
            qt[j] = q0[j] + p0[j] * t
            pt[j] = p0[j]
    return ClassicalPhasePoint(modes @ qt / math.sqrt(m), math.sqrt(m) * (modes @ pt))


def classical_energy(x: ClassicalPhasePoint, params: ChainParameters) -> float:
    k = force_constant_matrix(params)
    return float(0.5 * x.momenta @ x.momenta / params.mass
                 + 0.5 * x.positions @ k @ x.positions)


# ---------------------------------------------------------------------------
# analytic exciton populations

def bessel_populations(i0: int, beta: float, t: float, sites) -> np.ndarray:
    """Infinite-chain exciton populations P_i(t) = J_{i-i0}^2(2 |beta| t).

    Valid while the excitation has not reached the chain ends; sites and i0 are
    1-based.
    """
    sites = np.asarray(list(sites), dtype=int)
    return jv(sites - i0, 2.0 * abs(beta) * t) ** 2
