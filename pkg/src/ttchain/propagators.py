"""Time integrators on tensor-train states.

Four families share the same stepping interface:

* symmetric-Euler differencing S2/S4/S6/S8 (explicit two-step recurrences built
  from odd powers of H),
* odd/even operator splitting LT/SM with the YN and KL symplectic compositions
  of Strang steps,
* single-site TDVP (projection onto the fixed-rank manifold, two half-sweeps),
* global Krylov K2-K8 (Lanczos subspace exponentials in TT arithmetic).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import tt
from .hamiltonian import SlimComponents
from .tt import TensorTrainOperator, TensorTrainState, TruncationPolicy

SCHEMES = ("s2", "s4", "s6", "s8", "lt", "sm", "yn", "kl",
           "tdvp", "k2", "k4", "k6", "k8")
DIFFERENCING_ORDER = {"s2": 1, "s4": 2, "s6": 3, "s8": 4}
KRYLOV_DIM = {"k2": 2, "k4": 4, "k6": 6, "k8": 8}
SPLITTING = ("lt", "sm", "yn", "kl")

LANCZOS_BREAKDOWN = 1e-14
LOCAL_EXP_TOL = 1e-12
DENSE_LOCAL_DIM = 256


class PropagationError(RuntimeError):
    """Raised when a scheme cannot produce a finite next state."""


class UnstableStepError(PropagationError):
    """A step produced non-finite amplitudes (e.g. S2 beyond its stability limit)."""


@dataclass(frozen=True)
class PropagatorConfig:
    """Scheme selection plus the rank/step knobs shared by all families."""

    scheme: str
    dt: float
    max_rank: int
    inter_stage_rank: int | None = None
    svd_threshold: float = 0.0
    krylov_dim: int | None = None
    local_exp_dim: int = 8
    bootstrap: str = "taylor"

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; pick one of {SCHEMES}")
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.max_rank < 1:
            raise ValueError(f"max_rank must be >= 1, got {self.max_rank}")
        if self.inter_stage_rank is not None and self.inter_stage_rank < self.max_rank:
            raise ValueError("inter_stage_rank must be at least max_rank")
        m = self.krylov_dim if self.krylov_dim is not None else KRYLOV_DIM.get(self.scheme)
        if self.scheme in KRYLOV_DIM and (m < 2 or m % 2):
            raise ValueError(f"krylov_dim must be even and >= 2, got {m}")
        if self.bootstrap not in ("taylor", "halfstep"):
            raise ValueError(f"unknown bootstrap method {self.bootstrap!r}")

    @property
    def stage_rank(self) -> int:
        return self.inter_stage_rank if self.inter_stage_rank is not None else 2 * self.max_rank

    @property
    def policy(self) -> TruncationPolicy:
        return TruncationPolicy(self.max_rank, self.svd_threshold)

    @property
    def stage_policy(self) -> TruncationPolicy:
        return TruncationPolicy(self.stage_rank, self.svd_threshold)

    @property
    def effective_krylov_dim(self) -> int:
        return self.krylov_dim if self.krylov_dim is not None else KRYLOV_DIM[self.scheme]


# ---------------------------------------------------------------------------
# composition coefficients

@dataclass(frozen=True)
class CompositionCoefficients:
    """Palindromic stage weights of a symplectic composition; sum must be 1."""

    gammas: tuple

    def __post_init__(self):
        g = np.asarray(self.gammas)
        if abs(g.sum() - 1.0) > 1e-12:
            raise ValueError(f"composition weights sum to {g.sum()!r}, not 1")
        if not np.array_equal(g, g[::-1]):
            raise ValueError("composition weights must be palindromic")


def _yoshida_neri() -> CompositionCoefficients:
    g1 = 1.0 / (2.0 - 2.0 ** (1.0 / 3.0))
    return CompositionCoefficients((g1, 1.0 - 2.0 * g1, g1))


# 17-stage, 8th-order palindromic composition (full double precision; the
# usual 4-decimal roundings destroy the order).
_KL_HALF = (
    0.13020248308889008087881763,
    0.56116298177510838456196441,
    -0.38947496264484728640807860,
    0.15884190655515560089621075,
    -0.39590389413323757733623154,
    0.18453964097831570709183254,
    0.25837438768632204729397911,
    0.29501172360931029887096624,
)
_KL_MID = -0.60550853383003451169892108


def _kahan_li() -> CompositionCoefficients:
    return CompositionCoefficients(_KL_HALF + (_KL_MID,) + _KL_HALF[::-1])


def composition_coefficients(scheme: str) -> CompositionCoefficients:
    if scheme == "yn":
        return _yoshida_neri()
    if scheme == "kl":
        return _kahan_li()
    raise ValueError(f"no composition table for scheme {scheme!r}")


# ---------------------------------------------------------------------------
# differencing family

def _finite_norm(state: TensorTrainState) -> float:
    # after truncate() the state is left-canonical, so the last core carries the norm
    return float(np.linalg.norm(state.cores[-1]))


def step_differencing(psi_prev: TensorTrainState, psi_curr: TensorTrainState,
                      hamiltonian: TensorTrainOperator, dt: float, order_k: int,
                      policy: TruncationPolicy) -> TensorTrainState:
    """One step of the order-2K symmetric-Euler recurrence.

    psi(t+dt) = psi(t-dt) + sum_{k=1..K} 2/(2k-1)! (-i dt H)^{2k-1} psi(t),
    with an SVD truncation to the policy after every operator application and
    after the final accumulation.
    """
    if order_k not in (1, 2, 3, 4):
        raise ValueError(f"differencing order K must be 1..4, got {order_k}")
    if psi_prev.dims != psi_curr.dims:
        raise tt.TensorTrainError("the two input states must share dimensions")
    terms = [psi_prev]
    coeffs = [1.0]
    power = psi_curr
    # scalar prefactors are folded into the accumulation coefficients: the
    # stored powers are plain H^j psi, which truncation treats identically
    for j in range(1, 2 * order_k):
        power = tt.truncate(tt.apply_operator(hamiltonian, power), policy)
        if j % 2 == 1:
            terms.append(power)
            coeffs.append((-1j * dt) ** j * 2.0 / math.factorial(j))
    out = tt.truncate(tt.add_many(terms, coeffs), policy)
    if not np.isfinite(_finite_norm(out)):
        raise UnstableStepError("unstable step")
    return out


def bootstrap_previous(psi0: TensorTrainState, hamiltonian: TensorTrainOperator,
                       dt: float, order_k: int, policy: TruncationPolicy,
                       method: str = "taylor") -> TensorTrainState:
    """Backward state psi(-dt) needed to start the two-step differencing recurrence.

    "taylor" evaluates the order-(2K-1) series of exp(+i dt H); "halfstep" is
    the classical recipe of one backward Euler half step followed by one
    backward S2 half step.
    """
    if dt == 0.0:
        return psi0.copy()
    if method == "taylor":
        terms = [psi0]
        coeffs = [1.0]
        power = psi0
        for ell in range(1, 2 * order_k):
            power = tt.truncate(tt.apply_operator(hamiltonian, power), policy)
            terms.append(power)
            coeffs.append((1j * dt) ** ell / math.factorial(ell))
        return tt.truncate(tt.add_many(terms, coeffs), policy)
    if method == "halfstep":
        h = 0.5 * dt
        half = tt.truncate(
            tt.add_many([psi0, tt.scale(tt.apply_operator(hamiltonian, psi0), 1j * h)]),
            policy)
        return tt.truncate(
            tt.add_many([psi0, tt.scale(tt.apply_operator(hamiltonian, half), 2j * h)]),
            policy)
    raise ValueError(f"unknown bootstrap method {method!r}")


# ---------------------------------------------------------------------------
# splitting family

@dataclass(frozen=True)
class PairGenerator:
    """Dense Hermitian generator of one two-site (or lone last-site) factor.

    site is the 0-based left site; parity is "odd"/"even" by the 1-based site
    index, so generators within one parity group commute (disjoint supports).
    """

    site: int
    matrix: np.ndarray
    parity: str
    single_site: bool = False


def build_pair_generators(slim: SlimComponents) -> list:
    """Split the SLIM Hamiltonian into per-bond generators plus the lone S_N.

    Generator i (i < N-1) is S_i (x) I + sum_lambda L_lambda (x) M_lambda on
    sites (i, i+1); the last generator is S_{N-1} alone, so every single-site
    term appears exactly once.
    """
    n = slim.n_sites
    gens = []
    for i in range(n - 1):
        d0, d1 = slim.dims[i], slim.dims[i + 1]
        h = np.kron(slim.S[i], np.eye(d1))
        for l_op, m_op in zip(slim.L_channels[i], slim.M_channels[i]):
            h += np.kron(l_op, m_op)
        gens.append(PairGenerator(i, h, "odd" if i % 2 == 0 else "even"))
    last = n - 1
    gens.append(PairGenerator(last, slim.S[last].copy(),
                              "odd" if last % 2 == 0 else "even", single_site=True))
    return gens


def two_site_gate(gen: PairGenerator, tau: float) -> np.ndarray:
    """U = exp(-i tau h) through a Hermitian eigendecomposition."""
    h = gen.matrix
    if not np.allclose(h, h.conj().T, atol=1e-12):
        raise ValueError(f"generator at site {gen.site} is not Hermitian")
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * tau * w)) @ v.conj().T


class GateCache:
    """All two-site unitaries of one chain, memoized per time factor tau."""

    def __init__(self, slim: SlimComponents):
        self.generators = build_pair_generators(slim)
        self._layers: dict = {}

    def layer(self, parity: str, tau: float) -> list:
        key = (parity, tau)
        if key not in self._layers:
            self._layers[key] = [
                (g.site, two_site_gate(g, tau), g.single_site)
                for g in self.generators if g.parity == parity
            ]
        return self._layers[key]


def apply_gate_layer(psi: TensorTrainState, gates: list,
                     policy: TruncationPolicy) -> TensorTrainState:
    """Apply one parity group of gates left-to-right with bond cap = policy.max_rank.

    gates is a list of (site, unitary, single_site) sorted by site; the
    orthogonality center is walked along so every two-site split truncates
    against orthonormal environments.
    """
    state = psi
    for site, u, single in gates:
        state = tt.shift_center(state, site)
        if single:
            cores = [c.copy() for c in state.cores]
            cores[site] = np.einsum("pq,aqb->apb", u, cores[site], optimize=True)
            state = TensorTrainState(cores, ortho_center=site)
        else:
            block = tt.merge_pair(state, site)
            r0, d0, d1, r1 = block.shape
            block = np.einsum("pq,aqb->apb", u, block.reshape(r0, d0 * d1, r1),
                              optimize=True).reshape(r0, d0, d1, r1)
            left, right, _ = tt.split_pair(block, policy, direction="right")
            cores = [c.copy() for c in state.cores]
            cores[site] = left
            cores[site + 1] = right
            state = TensorTrainState(cores, ortho_center=site + 1)
    return state


def _strang_stage(state: TensorTrainState, cache: GateCache, tau: float,
                  policy: TruncationPolicy) -> TensorTrainState:
    state = apply_gate_layer(state, cache.layer("odd", 0.5 * tau), policy)
    state = apply_gate_layer(state, cache.layer("even", tau), policy)
    return apply_gate_layer(state, cache.layer("odd", 0.5 * tau), policy)


def step_splitting(psi: TensorTrainState, cache: GateCache, dt: float, scheme: str,
                   config: PropagatorConfig) -> TensorTrainState:
    """One LT/SM/YN/KL step; bonds are capped at inter_stage_rank between the
    exponential layers and the result is truncated to max_rank."""
    stage_policy = config.stage_policy
    if scheme == "lt":
        state = apply_gate_layer(psi, cache.layer("odd", dt), stage_policy)
        state = apply_gate_layer(state, cache.layer("even", dt), stage_policy)
    elif scheme == "sm":
        state = _strang_stage(psi, cache, dt, stage_policy)
    elif scheme in ("yn", "kl"):
        state = psi
        for gamma in composition_coefficients(scheme).gammas:
            state = _strang_stage(state, cache, gamma * dt, stage_policy)
    else:
        raise ValueError(f"unknown splitting scheme {scheme!r}")
    return tt.truncate(state, config.policy)


# ---------------------------------------------------------------------------
# effective-Hamiltonian machinery shared by TDVP

def _left_env_update(env, core, wcore):
    return np.einsum("akb,aqc,kqpl,bpd->cld", env, core.conj(), wcore, core,
                     optimize=True)


def _right_env_update(env, core, wcore):
    return np.einsum("cld,aqc,kqpl,bpd->akb", env, core.conj(), wcore, core,
                     optimize=True)


def _site_matvec(left, wcore, right):
    def matvec(x):
        t = np.einsum("apb,clb->apcl", x, right, optimize=True)
        t = np.einsum("apcl,kqpl->aqck", t, wcore, optimize=True)
        return np.einsum("aqck,mka->mqc", t, left, optimize=True)
    return matvec


def _site_dense(left, wcore, right):
    h = np.einsum("mka,kqpl,clb->mqcapb", left, wcore, right, optimize=True)
    dim = h.shape[0] * h.shape[1] * h.shape[2]
    return h.reshape(dim, dim)


def _bond_matvec(left, right):
    def matvec(c):
        return np.einsum("mka,ckb,ab->mc", left, right, c, optimize=True)
    return matvec


def _bond_dense(left, right):
    h = np.einsum("mka,ckb->mcab", left, right, optimize=True)
    dim = h.shape[0] * h.shape[1]
    return h.reshape(dim, dim)


def _lanczos_expm_substep(matvec, v, coeff, m):
    """Single Lanczos approximation of exp(coeff*A) v; returns (result, error estimate)."""
    nv = np.linalg.norm(v)
    if nv == 0.0:
        return v.copy(), 0.0
    basis = [v / nv]
    alphas, betas = [], []
    w = matvec(basis[0])
    alphas.append(np.real(np.vdot(basis[0], w)))
    w = w - alphas[0] * basis[0]
    broke_down = False
    for k in range(1, m):
        b = np.linalg.norm(w)
        if b < LANCZOS_BREAKDOWN:
            broke_down = True
            break
        betas.append(b)
        basis.append(w / b)
        w = matvec(basis[k]) - betas[k - 1] * basis[k - 1]
        alphas.append(np.real(np.vdot(basis[k], w)))
        w = w - alphas[k] * basis[k]
    k_eff = len(basis)
    residual = 0.0 if broke_down else float(np.linalg.norm(w))
    tri = np.diag(alphas[:k_eff]).astype(complex)
    if k_eff > 1:
        off = np.array(betas[:k_eff - 1])
        tri += np.diag(off, 1) + np.diag(off, -1)
    ew, ev = np.linalg.eigh(tri)
    u = ev @ (np.exp(coeff * ew) * ev[0].conj())
    # Saad-style a-posteriori estimate from the last Krylov component
    err = abs(coeff) * residual * abs(u[-1])
    out = np.tensordot(u, np.array(basis), axes=(0, 0))
    return nv * out, nv * err


def _expm_apply(matvec, dense_builder, v, coeff, m, tol=LOCAL_EXP_TOL, hint=1):
    """exp(coeff*A) v for Hermitian A; dense eigendecomposition for small blocks,
    otherwise restarted Lanczos with step halving until the error estimate
    meets tol.  Returns (result, substep count) so callers can warm-start.
    """
    flat = v.reshape(-1)
    if flat.size <= DENSE_LOCAL_DIM:
        h = dense_builder()
        ew, ev = np.linalg.eigh(h)
        out = ev @ (np.exp(coeff * ew) * (ev.conj().T @ flat))
        return out.reshape(v.shape), 0
    mv = lambda x: matvec(x.reshape(v.shape)).reshape(-1)
    nsub = max(1, int(hint))
    while True:
        c = coeff / nsub
        out = flat
        total_err = 0.0
        for _ in range(nsub):
            out, err = _lanczos_expm_substep(mv, out, c, m)
            total_err += err
            if not np.isfinite(total_err) or total_err > tol:
                break
        if total_err <= tol or nsub >= 4096:
            return out.reshape(v.shape), nsub
        nsub *= 2


# ---------------------------------------------------------------------------
# single-site TDVP

def expand_rank_profile(psi: TensorTrainState, max_rank: int) -> TensorTrainState:
    """Zero-pad bond ranks to min(max_rank, bipartition bound), right-canonicalized.

    Single-site TDVP keeps the rank profile fixed, so the initial product state
    is widened up front; QR orthonormalization keeps the padded (rank-deficient)
    bonds intact.
    """
    dims = psi.dims
    n = len(dims)
    target = [1]
    for i in range(1, n):
        target.append(int(min(max_rank, np.prod(dims[:i]), np.prod(dims[i:]))))
    target.append(1)
    if any(r > t for r, t in zip(psi.ranks, target)):
        psi = tt.truncate(psi, TruncationPolicy(max_rank))
    cores = []
    for i, core in enumerate(psi.cores):
        r0, d, r1 = core.shape
        t0, t1 = target[i], target[i + 1]
        padded = np.zeros((t0, d, t1), dtype=complex)
        padded[:r0, :, :r1] = core
        cores.append(padded)
    return tt.right_orthonormalize(TensorTrainState(cores), down_to=0)


def step_tdvp(psi: TensorTrainState, hamiltonian: TensorTrainOperator, dt: float,
              local_exp_dim: int = 8, tol: float = LOCAL_EXP_TOL,
              substep_hints: dict | None = None) -> TensorTrainState:
    """One second-order single-site TDVP step (two half-dt sweeps).

    Left-to-right: each core is evolved forward by dt/2 under its projected
    effective Hamiltonian, QR-split, and the bond factor evolved backward
    (+i) by dt/2 before being absorbed rightward; the last core takes a full
    dt, then the sweep mirrors back.  Ranks never change; norm and energy are
    conserved up to the local-exponential tolerance.

    substep_hints, when given, persists the restarted-Lanczos substep counts
    between steps (the effective operators barely change along a trajectory).
    """
    n = psi.n_sites
    if hamiltonian.dims != psi.dims:
        raise tt.TensorTrainError("operator/state dimension mismatch")
    st = psi if psi.ortho_center == 0 else tt.right_orthonormalize(psi, down_to=0)
    cores = [c.copy() for c in st.cores]
    wc = hamiltonian.cores
    hints = substep_hints if substep_hints is not None else {}

    def site_step(i, left, right, core, coeff):
        out, used = _expm_apply(_site_matvec(left, wc[i], right),
                                lambda: _site_dense(left, wc[i], right),
                                core, coeff, local_exp_dim, tol,
                                hint=hints.get(("site", i), 1))
        hints[("site", i)] = max(1, used // 2)
        return out

    def bond_step(i, left, right, c, coeff):
        out, used = _expm_apply(_bond_matvec(left, right),
                                lambda: _bond_dense(left, right),
                                c, coeff, local_exp_dim, tol,
                                hint=hints.get(("bond", i), 1))
        hints[("bond", i)] = max(1, used // 2)
        return out

    right_env = [None] * n
    right_env[n - 1] = np.ones((1, 1, 1), dtype=complex)
    for i in range(n - 1, 0, -1):
        right_env[i - 1] = _right_env_update(right_env[i], cores[i], wc[i])
    left_envs = [np.ones((1, 1, 1), dtype=complex)] * n

    for i in range(n - 1):
        cores[i] = site_step(i, left_envs[i], right_env[i], cores[i], -0.5j * dt)
        r0, d, r1 = cores[i].shape
        q, c = np.linalg.qr(cores[i].reshape(r0 * d, r1))
        cores[i] = q.reshape(r0, d, -1)
        left_envs[i + 1] = _left_env_update(left_envs[i], cores[i], wc[i])
        c = bond_step(i, left_envs[i + 1], right_env[i], c, +0.5j * dt)
        cores[i + 1] = np.tensordot(c, cores[i + 1], axes=(1, 0))

    cores[n - 1] = site_step(n - 1, left_envs[n - 1], right_env[n - 1],
                             cores[n - 1], -1j * dt)

    for i in range(n - 1, 0, -1):
        r0, d, r1 = cores[i].shape
        q, c = np.linalg.qr(cores[i].reshape(r0, d * r1).conj().T)
        cores[i] = q.conj().T.reshape(-1, d, r1)
        c = c.conj().T
        right_env[i - 1] = _right_env_update(right_env[i], cores[i], wc[i])
        c = bond_step(i - 1, left_envs[i], right_env[i - 1], c, +0.5j * dt)
        cores[i - 1] = np.tensordot(cores[i - 1], c, axes=(2, 0))
        cores[i - 1] = site_step(i - 1, left_envs[i - 1], right_env[i - 1],
                                 cores[i - 1], -0.5j * dt)

    return TensorTrainState(cores, ortho_center=0)


# ---------------------------------------------------------------------------
# global Krylov

def step_global_krylov(psi: TensorTrainState, hamiltonian: TensorTrainOperator,
                       dt: float, m: int, policy: TruncationPolicy) -> TensorTrainState:
    """Lanczos subspace step in TT arithmetic.

    Builds m+1 basis tensors (a Krylov space of polynomial degree m, so the
    step order matches the scheme label), truncating to the policy after every
    operator application and combination; terminates early when a recurrence
    beta signals an invariant subspace.
    """
    if m < 1:
        raise ValueError(f"krylov dimension must be positive, got {m}")
    nrm = tt.norm(psi)
    if nrm == 0.0 or not np.isfinite(nrm):
        raise UnstableStepError("cannot propagate a zero or non-finite state")
    basis = [tt.truncate(tt.scale(psi, 1.0 / nrm), policy)]
    alphas, betas = [], []
    n_basis = m + 1
    for k in range(n_basis):
        hv = tt.truncate(tt.apply_operator(hamiltonian, basis[k]), policy)
        alphas.append(tt.inner_product(basis[k], hv).real)
        if k == n_basis - 1:
            break
        terms = [hv, basis[k]]
        coeffs = [1.0, -alphas[k]]
        if k > 0:
            terms.append(basis[k - 1])
            coeffs.append(-betas[k - 1])
        w = tt.truncate(tt.add_many(terms, coeffs), policy)
        b = tt.norm(w)
        if b < LANCZOS_BREAKDOWN:
            break
        betas.append(b)
        basis.append(tt.scale(w, 1.0 / b))
    k_eff = len(basis)
    tri = np.diag(alphas[:k_eff]).astype(complex)
    if k_eff > 1:
        off = np.array(betas[:k_eff - 1])
        tri += np.diag(off, 1) + np.diag(off, -1)
    ew, ev = np.linalg.eigh(tri)
    u = ev @ (np.exp(-1j * dt * ew) * ev[0].conj())
    out = tt.add_many(basis, list(nrm * u))
    out = tt.truncate(out, policy)
    if not np.isfinite(_finite_norm(out)):
        raise UnstableStepError("unstable step")
    return out


# ---------------------------------------------------------------------------
# uniform stepping interface

class Propagator:
    """Base: holds the current state and advances it by one dt per step()."""

    def __init__(self, state: TensorTrainState, config: PropagatorConfig):
        self.config = config
        self.state = state

    def step(self) -> None:
        raise NotImplementedError


class DifferencingPropagator(Propagator):
    def __init__(self, hamiltonian, psi0, config):
        super().__init__(tt.truncate(psi0, config.policy), config)
        self.hamiltonian = hamiltonian
        self.order_k = DIFFERENCING_ORDER[config.scheme]
        self.previous = bootstrap_previous(self.state, hamiltonian, config.dt,
                                           self.order_k, config.policy,
                                           method=config.bootstrap)

    def step(self) -> None:
        nxt = step_differencing(self.previous, self.state, self.hamiltonian,
                                self.config.dt, self.order_k, self.config.policy)
        self.previous, self.state = self.state, nxt


class SplittingPropagator(Propagator):
    def __init__(self, slim, psi0, config):
        super().__init__(tt.truncate(psi0, config.policy), config)
        self.cache = GateCache(slim)

    def step(self) -> None:
        self.state = step_splitting(self.state, self.cache, self.config.dt,
                                    self.config.scheme, self.config)


class TdvpPropagator(Propagator):
    def __init__(self, hamiltonian, psi0, config):
        super().__init__(expand_rank_profile(psi0, config.max_rank), config)
        self.hamiltonian = hamiltonian
        self._hints: dict = {}

    def step(self) -> None:
        self.state = step_tdvp(self.state, self.hamiltonian, self.config.dt,
                               self.config.local_exp_dim,
                               substep_hints=self._hints)


class KrylovPropagator(Propagator):
    def __init__(self, hamiltonian, psi0, config):
        super().__init__(tt.truncate(psi0, config.policy), config)
        self.hamiltonian = hamiltonian

    def step(self) -> None:
        self.state = step_global_krylov(self.state, self.hamiltonian, self.config.dt,
                                        self.config.effective_krylov_dim,
                                        self.config.policy)


def make_propagator(config: PropagatorConfig, psi0: TensorTrainState,
                    hamiltonian: TensorTrainOperator | None = None,
                    slim: SlimComponents | None = None) -> Propagator:
    """Instantiate the right family for config.scheme."""
    scheme = config.scheme
    if scheme in DIFFERENCING_ORDER:
        if hamiltonian is None:
            raise ValueError("differencing schemes need the TT operator")
        return DifferencingPropagator(hamiltonian, psi0, config)
    if scheme in SPLITTING:
        if slim is None:
            raise ValueError("splitting schemes need the SLIM components")
        return SplittingPropagator(slim, psi0, config)
    if scheme == "tdvp":
        if hamiltonian is None:
            raise ValueError("tdvp needs the TT operator")
        return TdvpPropagator(hamiltonian, psi0, config)
    if scheme in KRYLOV_DIM:
        if hamiltonian is None:
            raise ValueError("krylov schemes need the TT operator")
        return KrylovPropagator(hamiltonian, psi0, config)
    raise ValueError(f"unknown scheme {scheme!r}")
