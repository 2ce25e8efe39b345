"""Tensor-train states and operators with the linear algebra every propagator needs.

A state is a chain of order-3 cores A_i of shape (r_{i-1}, d_i, r_i) with
r_0 = r_N = 1; an operator is a chain of order-4 cores W_i of shape
(R_{i-1}, d_i, d_i, R_i).  All public operations are value-semantics: they
return new objects and never mutate their inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class TensorTrainError(ValueError):
    """Raised for structurally invalid tensor trains or incompatible operands."""


@dataclass(frozen=True)
class TruncationPolicy:
    """Rank-reduction policy for SVD sweeps.

    max_rank caps every bond; svd_threshold is a relative singular-value
    cutoff (sigma_j < svd_threshold * sigma_max is dropped).  When both are
    active, whichever keeps fewer singular values wins.  threshold 0 means
    rank-controlled only.
    """

    max_rank: int
    svd_threshold: float = 0.0

    def __post_init__(self):
        if self.max_rank < 1:
            raise TensorTrainError(f"max_rank must be >= 1, got {self.max_rank}")
        if not (0.0 <= self.svd_threshold < 1.0):
            raise TensorTrainError(
                f"svd_threshold must lie in [0, 1), got {self.svd_threshold}")

    def kept_rank(self, singular_values: np.ndarray) -> int:
        k = min(self.max_rank, len(singular_values))
        if self.svd_threshold > 0.0 and len(singular_values):
            cut = self.svd_threshold * singular_values[0]
            k = min(k, int(np.count_nonzero(singular_values >= cut)))
        return max(k, 1)


class TensorTrainState:
    """Order-N quantum state as a chain of complex order-3 cores."""

    __slots__ = ("cores", "ortho_center")

    def __init__(self, cores, ortho_center=None):
        cores = [np.asarray(c, dtype=complex) for c in cores]
        _check_chain(cores, order=3)
        self.cores = cores
        self.ortho_center = ortho_center

    @property
    def n_sites(self) -> int:
        return len(self.cores)

    @property
    def dims(self) -> list:
        return [c.shape[1] for c in self.cores]

    @property
    def ranks(self) -> list:
        return [self.cores[0].shape[0]] + [c.shape[2] for c in self.cores]

    def copy(self) -> "TensorTrainState":
        return TensorTrainState([c.copy() for c in self.cores], self.ortho_center)

    def to_dense(self) -> np.ndarray:
        """Materialize as a vector of length prod(dims); site 1 is the slowest index."""
        v = self.cores[0]
        for core in self.cores[1:]:
            v = np.tensordot(v, core, axes=(v.ndim - 1, 0))
        return v.reshape(-1)

    def __repr__(self):
        return (f"TensorTrainState(dims={self.dims}, ranks={self.ranks}, "
                f"ortho_center={self.ortho_center})")


class TensorTrainOperator:
    """Order-N linear operator as a chain of order-4 cores W[k, p_out, p_in, k']."""

    __slots__ = ("cores",)

    def __init__(self, cores):
        cores = [np.ascontiguousarray(c) for c in cores]
        _check_chain(cores, order=4)
        for i, c in enumerate(cores):
            if c.shape[1] != c.shape[2]:
                raise TensorTrainError(
                    f"operator core {i} is not square in its physical legs: {c.shape}")
        self.cores = cores

    @property
    def n_sites(self) -> int:
        return len(self.cores)

    @property
    def dims(self) -> list:
        return [c.shape[1] for c in self.cores]

    @property
    def op_ranks(self) -> list:
        return [self.cores[0].shape[0]] + [c.shape[3] for c in self.cores]

    @classmethod
    def identity(cls, dims) -> "TensorTrainOperator":
        return cls([np.eye(d).reshape(1, d, d, 1) for d in dims])

    def to_dense(self) -> np.ndarray:
        """Materialize as a (D, D) matrix; row/column orderings match to_dense of states."""
        T = self.cores[0][0]                       # (d, d, R)
        for core in self.cores[1:]:
            da, db, k = T.shape
            _, d, _, l = core.shape
            T = (T.reshape(da * db, k) @ core.reshape(k, d * d * l))
            T = T.reshape(da, db, d, d, l).transpose(0, 2, 1, 3, 4)
            T = T.reshape(da * d, db * d, l)
        return np.ascontiguousarray(T[:, :, 0])

    def __repr__(self):
        return f"TensorTrainOperator(dims={self.dims}, op_ranks={self.op_ranks})"


def _check_chain(cores, order: int):
    if not cores:
        raise TensorTrainError("a tensor train needs at least one core")
    for i, c in enumerate(cores):
        if c.ndim != order:
            raise TensorTrainError(f"core {i} has order {c.ndim}, expected {order}")
    if cores[0].shape[0] != 1 or cores[-1].shape[-1] != 1:
        raise TensorTrainError("boundary ranks must be 1")
    for i in range(len(cores) - 1):
        if cores[i].shape[-1] != cores[i + 1].shape[0]:
            raise TensorTrainError(
                f"bond mismatch between cores {i} and {i + 1}: "
                f"{cores[i].shape} vs {cores[i + 1].shape}")


# ---------------------------------------------------------------------------
# construction

def product_state(local_vectors) -> TensorTrainState:
    """Rank-1 state from per-site vectors, each normalized; global norm 1."""
    cores = []
    for i, v in enumerate(local_vectors):
        v = np.asarray(v, dtype=complex).reshape(-1)
        nv = np.linalg.norm(v)
        if nv == 0.0 or not np.isfinite(nv):
            raise TensorTrainError(f"degenerate local state at site {i + 1}")
        cores.append((v / nv).reshape(1, -1, 1))
    return TensorTrainState(cores, ortho_center=len(cores) - 1)


def random_state(dims, max_rank: int, rng: np.random.Generator) -> TensorTrainState:
    """Normalized random TT with bond ranks min(max_rank, dimension bound)."""
    n = len(dims)
    ranks = [1]
    for i in range(1, n):
        ranks.append(min(max_rank,
                         int(np.prod(dims[:i])),
                         int(np.prod(dims[i:]))))
    ranks.append(1)
    cores = []
    for i, d in enumerate(dims):
        shape = (ranks[i], d, ranks[i + 1])
        cores.append(rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    state = TensorTrainState(cores)
    return scale(state, 1.0 / norm(state))


# ---------------------------------------------------------------------------
# canonical forms

def _qr_step_right(cores, i):
    """Left-orthonormalize core i, pushing the non-isometric factor into core i+1."""
    r0, d, r1 = cores[i].shape
    q, r = np.linalg.qr(cores[i].reshape(r0 * d, r1))
    cores[i] = q.reshape(r0, d, -1)
    cores[i + 1] = np.tensordot(r, cores[i + 1], axes=(1, 0))


def _qr_step_left(cores, i):
    """Right-orthonormalize core i, pushing the factor into core i-1."""
    r0, d, r1 = cores[i].shape
    q, r = np.linalg.qr(cores[i].reshape(r0, d * r1).conj().T)
    cores[i] = q.conj().T.reshape(-1, d, r1)
    cores[i - 1] = np.tensordot(cores[i - 1], r.conj().T, axes=(2, 0))


def left_orthonormalize(state: TensorTrainState, up_to=None) -> TensorTrainState:
    """Make cores 0..up_to-1 left-isometric; the dense vector is unchanged.

    up_to is the 0-based site that becomes the orthogonality center
    (default: last site).
    """
    n = state.n_sites
    if up_to is None:
        up_to = n - 1
    if not 0 <= up_to < n:
        raise TensorTrainError(f"center {up_to} out of range for {n} sites")
    cores = [c.copy() for c in state.cores]
    for i in range(up_to):
        _qr_step_right(cores, i)
    return TensorTrainState(cores, ortho_center=up_to)


def right_orthonormalize(state: TensorTrainState, down_to: int = 0) -> TensorTrainState:
    """Mirror of left_orthonormalize: cores down_to+1..N-1 become right-isometric."""
    n = state.n_sites
    if not 0 <= down_to < n:
        raise TensorTrainError(f"center {down_to} out of range for {n} sites")
    cores = [c.copy() for c in state.cores]
    for i in range(n - 1, down_to, -1):
        _qr_step_left(cores, i)
    return TensorTrainState(cores, ortho_center=down_to)


def shift_center(state: TensorTrainState, target: int) -> TensorTrainState:
    """Move the orthogonality center to `target` with QR steps (canonicalizing first
    if the state has no center)."""
    if state.ortho_center is None:
        state = right_orthonormalize(state, down_to=0)
    if state.ortho_center == target:
        return state
    cores = [c.copy() for c in state.cores]
    c = state.ortho_center
    while c < target:
        _qr_step_right(cores, c)
        c += 1
    while c > target:
        _qr_step_left(cores, c)
        c -= 1
    return TensorTrainState(cores, ortho_center=target)


def _collapse_pass(cores):
    """Exact QR collapse of bonds that exceed their dimension bound.

    Applying an operator multiplies ranks, but a bond can never usefully exceed
    (left rows) x (physical) on either side; collapsing those first keeps all
    subsequent decompositions small where LAPACK is cheap.  Lossless.
    """
    n = len(cores)
    for i in range(n - 1):
        r0, d, r1 = cores[i].shape
        if r0 * d < r1:
            q, r = np.linalg.qr(cores[i].reshape(r0 * d, r1))
            cores[i] = q.reshape(r0, d, -1)
            cores[i + 1] = np.tensordot(r, cores[i + 1], axes=(1, 0))
    for i in range(n - 1, 0, -1):
        r0, d, r1 = cores[i].shape
        if d * r1 < r0:
            q, r = np.linalg.qr(cores[i].reshape(r0, d * r1).conj().T)
            cores[i] = q.conj().T.reshape(-1, d, r1)
            cores[i - 1] = np.tensordot(cores[i - 1], r.conj().T, axes=(2, 0))


def truncate(state: TensorTrainState, policy: TruncationPolicy, with_weights: bool = False):
    """SVD rank reduction to the policy; returns a left-canonical state.

    The state is right-orthonormalized first, so the dropped singular values at
    each cut are the true discarded Schmidt weights of that bipartition and
    ||psi - truncate(psi)||^2 <= sum of the discarded weights.
    With with_weights=True, returns (state, weights) where weights[i] is the sum
    of squared dropped singular values at bond i.
    """
    cores = [c.copy() for c in state.cores]
    n = len(cores)
    _collapse_pass(cores)
    for i in range(n - 1, 0, -1):
        _qr_step_left(cores, i)
    weights = []
    for i in range(n - 1):
        r0, d, r1 = cores[i].shape
        u, s, vh = np.linalg.svd(cores[i].reshape(r0 * d, r1), full_matrices=False)
        k = policy.kept_rank(s)
        weights.append(float(np.sum(s[k:] ** 2)))
        cores[i] = u[:, :k].reshape(r0, d, k)
        cores[i + 1] = np.tensordot(s[:k, None] * vh[:k], cores[i + 1], axes=(1, 0))
    out = TensorTrainState(cores, ortho_center=n - 1)
    return (out, weights) if with_weights else out


# ---------------------------------------------------------------------------
# arithmetic

def scale(state: TensorTrainState, factor: complex) -> TensorTrainState:
    cores = [c.copy() for c in state.cores]
    i = state.ortho_center if state.ortho_center is not None else 0
    cores[i] = cores[i] * factor
    return TensorTrainState(cores, ortho_center=state.ortho_center)


def add(a: TensorTrainState, b: TensorTrainState) -> TensorTrainState:
    """Direct sum of the cores: dense(a+b) = dense(a)+dense(b); interior ranks add."""
    return add_many([a, b])


def add_many(states, coeffs=None) -> TensorTrainState:
    """Linear combination sum_j coeffs[j] * states[j] in one concatenation."""
    if coeffs is None:
        coeffs = [1.0] * len(states)
    if len(states) != len(coeffs):
        raise TensorTrainError("states and coeffs must have equal length")
    dims = states[0].dims
    for s in states[1:]:
        if s.dims != dims:
            raise TensorTrainError(f"dimension mismatch: {s.dims} vs {dims}")
    n = len(dims)
    if n == 1:
        total = sum(c * s.cores[0] for c, s in zip(coeffs, states))
        return TensorTrainState([total])
    cores = []
    for i in range(n):
        blocks = [s.cores[i] for s in states]
        if i == 0:
            blocks = [c * blk for c, blk in zip(coeffs, blocks)]
            cores.append(np.concatenate(blocks, axis=2))
        elif i == n - 1:
            cores.append(np.concatenate(blocks, axis=0))
        else:
            r0 = sum(b.shape[0] for b in blocks)
            r1 = sum(b.shape[2] for b in blocks)
            merged = np.zeros((r0, dims[i], r1), dtype=complex)
            o0 = o1 = 0
            for b in blocks:
                merged[o0:o0 + b.shape[0], :, o1:o1 + b.shape[2]] = b
                o0 += b.shape[0]
                o1 += b.shape[2]
            cores.append(merged)
    return TensorTrainState(cores)


_EINSUM_PATHS: dict = {}


def _einsum_cached(subscripts: str, *operands):
    """einsum with the contraction path memoized per operand shapes."""
    key = (subscripts,) + tuple(op.shape for op in operands)
    path = _EINSUM_PATHS.get(key)
    if path is None:
        path = np.einsum_path(subscripts, *operands, optimize="optimal")[0]
        _EINSUM_PATHS[key] = path
    return np.einsum(subscripts, *operands, optimize=path)


def apply_operator(op: TensorTrainOperator, state: TensorTrainState) -> TensorTrainState:
    """Contract an operator into a state; interior ranks multiply (R_i * r_i)."""
    if op.dims != state.dims:
        raise TensorTrainError(f"dimension mismatch: {op.dims} vs {state.dims}")
    cores = []
    for w, a in zip(op.cores, state.cores):
        k, p, _, l = w.shape
        r0, _, r1 = a.shape
        b = _einsum_cached("kpql,aqb->kaplb", w, a)
        cores.append(b.reshape(k * r0, p, l * r1))
    return TensorTrainState(cores)


def inner_product(a: TensorTrainState, b: TensorTrainState) -> complex:
    """<a|b>, conjugate-linear in a."""
    if a.dims != b.dims:
        raise TensorTrainError(f"dimension mismatch: {a.dims} vs {b.dims}")
    env = np.ones((1, 1), dtype=complex)
    for ca, cb in zip(a.cores, b.cores):
        env = np.einsum("ab,apc,bpd->cd", env, ca.conj(), cb, optimize=True)
    return complex(env[0, 0])


def norm(a: TensorTrainState) -> float:
    return float(np.sqrt(max(inner_product(a, a).real, 0.0)))


def operator_expectation(state: TensorTrainState, op: TensorTrainOperator) -> complex:
    """<psi|O|psi> by a single zipper contraction."""
    if op.dims != state.dims:
        raise TensorTrainError(f"dimension mismatch: {op.dims} vs {state.dims}")
    env = np.ones((1, 1, 1), dtype=complex)
    for a, w in zip(state.cores, op.cores):
        env = np.einsum("akb,aqc,kqpl,bpd->cld", env, a.conj(), w, a, optimize=True)
    return complex(env[0, 0, 0])


# ---------------------------------------------------------------------------
# two-site handling for gate-based propagators

def merge_pair(state: TensorTrainState, i: int) -> np.ndarray:
    """Contract cores i, i+1 into an order-4 block (r_{i-1}, d_i, d_{i+1}, r_{i+1}).

    The orthogonality center must sit on one of the two merged sites, otherwise
    the split afterwards would truncate against a non-orthonormal environment.
    """
    if not 0 <= i < state.n_sites - 1:
        raise TensorTrainError(f"no pair starting at site {i}")
    if state.ortho_center not in (i, i + 1):
        raise TensorTrainError(
            f"orthogonality center {state.ortho_center} not adjacent to pair ({i}, {i + 1})")
    return np.tensordot(state.cores[i], state.cores[i + 1], axes=(2, 0))


def split_pair(block: np.ndarray, policy: TruncationPolicy, direction: str = "right"):
    """SVD a merged two-site block back into cores.

    direction "right" leaves the left core isometric (center moves to the right
    core); "left" is the mirror.  The new bond obeys
    min(r_left*d_i, d_{i+1}*r_right, policy.max_rank) and the threshold.
    Returns (left_core, right_core, discarded_weight).
    """
    if block.ndim != 4:
        raise TensorTrainError(f"expected an order-4 block, got order {block.ndim}")
    r0, d0, d1, r1 = block.shape
    u, s, vh = np.linalg.svd(block.reshape(r0 * d0, d1 * r1), full_matrices=False)
    k = policy.kept_rank(s)
    weight = float(np.sum(s[k:] ** 2))
    if direction == "right":
        left = u[:, :k].reshape(r0, d0, k)
        right = (s[:k, None] * vh[:k]).reshape(k, d1, r1)
    elif direction == "left":
        left = (u[:, :k] * s[:k]).reshape(r0, d0, k)
        right = vh[:k].reshape(k, d1, r1)
    else:
        raise TensorTrainError(f"unknown split direction {direction!r}")
    return left, right, weight


# ---------------------------------------------------------------------------
# debug dump

def dump_state(state: TensorTrainState, directory) -> None:
    """Write cores as .npy files plus a small text manifest (shapes and ranks)."""
    path = Path(directory)
    path.mkdir(parents=True, exist_ok=True)
    for i, core in enumerate(state.cores):
        np.save(path / f"core_{i:03d}.npy", core)
    manifest = {
        "n_sites": state.n_sites,
        "dims": state.dims,
        "ranks": state.ranks,
        "ortho_center": state.ortho_center,
        "shapes": [list(c.shape) for c in state.cores],
    }
    (path / "manifest.txt").write_text(json.dumps(manifest, indent=2) + "\n")
