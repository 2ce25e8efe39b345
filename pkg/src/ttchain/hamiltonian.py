"""Exciton, phonon and coupled chain Hamiltonians as TT operators via the SLIM pattern.

The models are nearest-neighbor chains: a two-state exciton per site with
on-site energy alpha and hopping beta, a local oscillator per site with
restraining frequency nu coupled to its neighbors with frequency omega, and a
linear exciton-phonon coupling sigma.  Everything is expressed in second
quantization with per-site effective frequencies, then assembled into an MPO
whose bond rank is 2 + (number of interaction channels).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .tt import TensorTrainOperator

EXCITON = "exciton"
PHONON = "phonon"
COUPLED = "coupled"
KINDS = (EXCITON, PHONON, COUPLED)

# homogeneous-chain defaults: alpha, beta in hartree; nu, omega in hartree/hbar;
# sigma in hartree/bohr; mass in electron masses
DEFAULT_ALPHA = 0.1
DEFAULT_BETA = -0.01
DEFAULT_MASS = 1.0
DEFAULT_NU = 1e-3
DEFAULT_OMEGA = math.sqrt(2.0) * 1e-3
DEFAULT_SIGMA = 2e-4


class ModelError(ValueError):
    """Raised for unsupported or inconsistent model configurations."""


@dataclass(frozen=True)
class ChainParameters:
    """Physical description of a homogeneous, non-cyclic chain."""

    kind: str
    n_sites: int
    alpha: float = DEFAULT_ALPHA
    beta: float = DEFAULT_BETA
    mass: float = DEFAULT_MASS
    nu: float = DEFAULT_NU
    omega: float = DEFAULT_OMEGA
    sigma: float = DEFAULT_SIGMA
    d_ex: int = 2
    d_ph: int = 8
    cyclic: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ModelError(f"unknown system kind {self.kind!r}")
        min_sites = 1 if self.kind == EXCITON else 2
        if self.n_sites < min_sites:
            raise ModelError(f"{self.kind} chain needs at least {min_sites} site(s)")
        if self.cyclic:
            raise ModelError("cyclic chains are not supported")
        if self.d_ex != 2:
            raise ModelError("the exciton model is a two-state system (d_ex = 2)")
        if self.d_ph < 2:
            raise ModelError("d_ph must be at least 2")
        if self.kind != EXCITON and (self.mass <= 0 or self.nu <= 0 or self.omega < 0):
            raise ModelError("masses and frequencies must be positive")

    @property
    def local_dim(self) -> int:
        return local_site_dimension(self)

    @property
    def total_dim(self) -> int:
        return self.local_dim ** self.n_sites

    @property
    def has_exciton(self) -> bool:
        return self.kind in (EXCITON, COUPLED)

    @property
    def has_phonon(self) -> bool:
        return self.kind in (PHONON, COUPLED)


def local_site_dimension(params: ChainParameters) -> int:
    """2 for excitons, d_ph for phonons, and their product for coupled sites."""
    if params.kind == EXCITON:
        return params.d_ex
    if params.kind == PHONON:
        return params.d_ph
    return params.d_ex * params.d_ph


def ladder_matrices(d: int):
    """Bosonic (raise, lower) pair on a d-level Fock ladder: lower[n-1, n] = sqrt(n)."""
    if d < 2:
        raise ModelError(f"need at least two levels for ladder operators, got {d}")
    lower = np.zeros((d, d))
    for n in range(1, d):
        lower[n - 1, n] = math.sqrt(n)
    return lower.T.copy(), lower


@dataclass(frozen=True)
class EffectiveFrequencies:
    """Per-site/per-bond second-quantization constants.

    nu_tilde[i] is the effective single-site frequency (end sites lose the
    missing-neighbor term under the square root); omega_tilde[i] belongs to bond
    (i, i+1).  sigma_bar[i] couples the exciton on site i to the oscillator on
    site i+1 and sigma_barbar[i] couples it to the one on site i-1; the entries
    referencing a nonexistent neighbor are NaN and never consumed.
    """

    nu_tilde: np.ndarray
    omega_tilde: np.ndarray
    sigma_bar: np.ndarray
    sigma_barbar: np.ndarray


def effective_frequencies(params: ChainParameters) -> EffectiveFrequencies:
    n = params.n_sites
    m, nu, om, sg = params.mass, params.nu, params.omega, params.sigma
    nu_tilde = np.empty(n)
    for i in range(n):
        val = nu ** 2
        if i > 0:
            val += 0.5 * om ** 2          # m_{i-1}/(m_i + m_{i-1}) = 1/2, equal masses
        if i < n - 1:
            val += 0.5 * om ** 2
        nu_tilde[i] = math.sqrt(val)
    if np.any(nu_tilde <= 0):
        raise ModelError("effective frequencies must be positive")
    omega_tilde = np.empty(max(n - 1, 0))
    for i in range(n - 1):
        mu = 0.5 * m                       # reduced mass of equal-mass neighbors
        omega_tilde[i] = mu * om ** 2 / (
            2.0 * math.sqrt(m * nu_tilde[i] * m * nu_tilde[i + 1]))
    sigma_bar = np.full(n, np.nan)
    sigma_barbar = np.full(n, np.nan)
    for i in range(n - 1):
        sigma_bar[i] = sg / math.sqrt(2.0 * m * nu_tilde[i + 1])
    for i in range(1, n):
        sigma_barbar[i] = sg / math.sqrt(2.0 * m * nu_tilde[i - 1])
    return EffectiveFrequencies(nu_tilde, omega_tilde, sigma_bar, sigma_barbar)


@dataclass
class SlimComponents:
    """Single-site matrices S_i plus per-bond interaction channel pairs (L, M)."""

    dims: list
    S: list                                  # N matrices (d, d)
    L_channels: list = field(default_factory=list)   # per bond: list of (d, d)
    M_channels: list = field(default_factory=list)   # per bond: matching list

    @property
    def n_sites(self) -> int:
        return len(self.S)

    def channel_counts(self) -> list:
        return [len(ch) for ch in self.L_channels]


def _site_operators(params: ChainParameters):
    """Local operators embedded in the site basis (exciton index slow, phonon fast)."""
    d = params.local_dim
    ident = np.eye(d)
    n_ex = q_ph = b_raise = b_lower = None
    num_ph = None
    if params.has_exciton:
        br, bl = ladder_matrices(params.d_ex)
        n_loc = br @ bl
        if params.kind == COUPLED:
            eye_ph = np.eye(params.d_ph)
            b_raise = np.kron(br, eye_ph)
            b_lower = np.kron(bl, eye_ph)
            n_ex = np.kron(n_loc, eye_ph)
        else:
            b_raise, b_lower, n_ex = br, bl, n_loc
    if params.has_phonon:
        cr, cl = ladder_matrices(params.d_ph)
        q_loc = cr + cl
        num_loc = cr @ cl
        if params.kind == COUPLED:
            eye_ex = np.eye(params.d_ex)
            q_ph = np.kron(eye_ex, q_loc)
            num_ph = np.kron(eye_ex, num_loc)
        else:
            q_ph, num_ph = q_loc, num_loc
    return ident, n_ex, b_raise, b_lower, q_ph, num_ph


def build_slim(params: ChainParameters) -> SlimComponents:
    """Single-site and bond-channel components of the chain Hamiltonian.

    Bond channels (dropped when their coefficient is exactly zero):
      (beta b_dag, b), (beta b, b_dag),
      (-omega_tilde (c_dag+c), (c_dag+c)),
      (sigma_bar b_dag b, (c_dag+c)), (-(c_dag+c), sigma_barbar b_dag b).
    """
    if params.cyclic:
        raise ModelError("cyclic chains are not supported")
    freqs = effective_frequencies(params) if params.has_phonon else None
    ident, n_ex, b_raise, b_lower, q_ph, num_ph = _site_operators(params)
    n = params.n_sites
    d = params.local_dim

    S = []
    for i in range(n):
        s_i = np.zeros((d, d))
        if params.has_exciton:
            s_i += params.alpha * n_ex
        if params.has_phonon:
            s_i += freqs.nu_tilde[i] * (num_ph + 0.5 * ident)
        S.append(s_i)

    L_channels, M_channels = [], []
    for i in range(n - 1):
        ls, ms = [], []
        if params.has_exciton and params.beta != 0.0:
            ls.append(params.beta * b_raise)
            ms.append(b_lower)
            ls.append(params.beta * b_lower)
            ms.append(b_raise)
        if params.has_phonon and freqs.omega_tilde[i] != 0.0:
            ls.append(-freqs.omega_tilde[i] * q_ph)
            ms.append(q_ph)
        if params.kind == COUPLED and params.sigma != 0.0:
            ls.append(freqs.sigma_bar[i] * n_ex)
            ms.append(q_ph)
            ls.append(-q_ph)
            ms.append(freqs.sigma_barbar[i + 1] * n_ex)
        L_channels.append(ls)
        M_channels.append(ms)
    return SlimComponents([d] * n, S, L_channels, M_channels)


def assemble_operator(slim: SlimComponents) -> TensorTrainOperator:
    """SLIM components into an MPO with interior operator rank 2 + xi.

    Interior core layout (automaton states): row/column 0 carries the finished
    part of the Hamiltonian, columns 1..xi hold open interaction channels, the
    last state is the untouched identity prefix.
    """
    n = slim.n_sites
    dims = slim.dims
    if n == 1:
        return TensorTrainOperator([slim.S[0].reshape(1, dims[0], dims[0], 1)])
    cores = []
    for i in range(n):
        d = dims[i]
        ident = np.eye(d)
        xi_in = len(slim.L_channels[i - 1]) if i > 0 else 0
        xi_out = len(slim.L_channels[i]) if i < n - 1 else 0
        if i == 0:
            core = np.zeros((1, 2 + xi_out, d, d))
            core[0, 0] = slim.S[0]
            for lam, l_op in enumerate(slim.L_channels[0]):
                core[0, 1 + lam] = l_op
            core[0, 1 + xi_out] = ident
        elif i == n - 1:
            core = np.zeros((2 + xi_in, 1, d, d))
            core[0, 0] = ident
            for lam, m_op in enumerate(slim.M_channels[i - 1]):
                core[1 + lam, 0] = m_op
            core[1 + xi_in, 0] = slim.S[i]
        else:
            core = np.zeros((2 + xi_in, 2 + xi_out, d, d))
            core[0, 0] = ident
            for lam, m_op in enumerate(slim.M_channels[i - 1]):
                core[1 + lam, 0] = m_op
            core[1 + xi_in, 0] = slim.S[i]
            for lam, l_op in enumerate(slim.L_channels[i]):
                core[1 + xi_in, 1 + lam] = l_op
            core[1 + xi_in, 1 + xi_out] = ident
        cores.append(core.transpose(0, 2, 3, 1))
    return TensorTrainOperator(cores)


def chain_operator(params: ChainParameters) -> TensorTrainOperator:
    """Convenience: SLIM-build and assemble the chain Hamiltonian in one call."""
    return assemble_operator(build_slim(params))


def single_site_operator(params: ChainParameters, site: int, matrix: np.ndarray) -> TensorTrainOperator:
    """Rank-1 MPO embedding one local operator at a 0-based site."""
    d = params.local_dim
    cores = []
    for i in range(params.n_sites):
        op = matrix if i == site else np.eye(d)
        cores.append(op.reshape(1, d, d, 1))
    return TensorTrainOperator(cores)


def exciton_number_operator(params: ChainParameters, site=None) -> TensorTrainOperator:
    """b_dag b on one site, or the summed total when site is None."""
    if not params.has_exciton:
        raise ModelError(f"no excitonic subsystem in a {params.kind} chain")
    _, n_ex, *_ = _site_operators(params)
    if site is not None:
        return single_site_operator(params, site, n_ex)
    comps = SlimComponents([params.local_dim] * params.n_sites,
                           [n_ex.copy() for _ in range(params.n_sites)],
                           [[] for _ in range(params.n_sites - 1)],
                           [[] for _ in range(params.n_sites - 1)])
    return assemble_operator(comps)


def displacement_operator(params: ChainParameters, site: int) -> TensorTrainOperator:
    """Position operator R_site = (c_dag + c) / sqrt(2 m nu_tilde) as a rank-1 MPO."""
    if not params.has_phonon:
        raise ModelError(f"no phononic subsystem in a {params.kind} chain")
    freqs = effective_frequencies(params)
    *_, q_ph, _ = _site_operators(params)
    factor = 1.0 / math.sqrt(2.0 * params.mass * freqs.nu_tilde[site])
    return single_site_operator(params, site, factor * q_ph)
