"""Initial-state preparation, expectation values, and the trajectory RMSD metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import tt
from .hamiltonian import (
    COUPLED,
    EXCITON,
    PHONON,
    ChainParameters,
    ModelError,
    TensorTrainOperator,
    displacement_operator,
    effective_frequencies,
    exciton_number_operator,
)


@dataclass(frozen=True)
class InitialStateSpec:
    """Which site is excited/displaced and how.

    excited_site is 1-based; 0 means "near the center", i.e. ceil(N/2).
    displacement is the coherent-state mean displacement of the excited site.
    """

    excited_site: int = 0
    displacement: float = 1.0
    excite_exciton: bool = True
    displace_phonon: bool = True

    def resolve_site(self, n_sites: int) -> int:
        site = self.excited_site if self.excited_site else math.ceil(n_sites / 2)
        if not 1 <= site <= n_sites:
            raise ModelError(f"excited_site {site} outside chain of {n_sites} sites")
        return site


def coherent_state(d_ph: int, lam: complex) -> np.ndarray:
    """Truncated coherent-state amplitudes a_n = e^{-|lam|^2/2} lam^n / sqrt(n!),
    renormalized after the Fock-space cutoff."""
    if d_ph < 2:
        raise ModelError(f"d_ph must be at least 2, got {d_ph}")
    n = np.arange(d_ph)
    log_fact = np.cumsum(np.concatenate(([0.0], np.log(np.arange(1, d_ph)))))
    amps = np.exp(-0.5 * abs(lam) ** 2) * np.power(complex(lam), n) / np.exp(0.5 * log_fact)
    return amps / np.linalg.norm(amps)


def coherent_amplitude(params: ChainParameters, site: int, displacement: float) -> float:
    """lambda = sqrt(m nu_tilde / 2) * displacement so that <R_site> = displacement."""
    freqs = effective_frequencies(params)
    return math.sqrt(params.mass * freqs.nu_tilde[site] / 2.0) * displacement


def build_initial_state(params: ChainParameters, spec: InitialStateSpec) -> tt.TensorTrainState:
    """Rank-1 product state: one excited/displaced site, the rest in local ground states."""
    site = spec.resolve_site(params.n_sites) - 1
    vectors = []
    for i in range(params.n_sites):
        if params.has_exciton:
            ex = np.zeros(params.d_ex, dtype=complex)
            ex[1 if (i == site and spec.excite_exciton) else 0] = 1.0
        if params.has_phonon:
            if i == site and spec.displace_phonon:
                lam = coherent_amplitude(params, i, spec.displacement)
                ph = coherent_state(params.d_ph, lam)
            else:
                ph = np.zeros(params.d_ph, dtype=complex)
                ph[0] = 1.0
        if params.kind == EXCITON:
            vectors.append(ex)
        elif params.kind == PHONON:
            vectors.append(ph)
        else:
            vectors.append(np.kron(ex, ph))
    return tt.product_state(vectors)


# ---------------------------------------------------------------------------
# expectation values

def expectation(psi: tt.TensorTrainState, op: TensorTrainOperator) -> float:
    """Normalized expectation <psi|O|psi> / <psi|psi>; real part (Hermitian O)."""
    nrm2 = tt.inner_product(psi, psi).real
    if nrm2 <= 0.0:
        raise ModelError("cannot normalize a zero state")
    return tt.operator_expectation(psi, op).real / nrm2


def energy(psi: tt.TensorTrainState, hamiltonian: TensorTrainOperator) -> float:
    return expectation(psi, hamiltonian)


def site_population(psi: tt.TensorTrainState, params: ChainParameters, site: int) -> float:
    """Exciton occupation <b_dag b> on a 1-based site."""
    return expectation(psi, exciton_number_operator(params, site - 1))


def displacement(psi: tt.TensorTrainState, params: ChainParameters, site: int) -> float:
    """<R_site> in the units of the coherent-state displacement (1-based site)."""
    return expectation(psi, displacement_operator(params, site - 1))


# ---------------------------------------------------------------------------
# RMSD metrics

@dataclass
class MetricsReport:
    """Trajectory-level deviation aggregates, averaged over main steps 1..M."""

    rmsd_norm: float = math.nan
    rmsd_energy_rel: float = math.nan
    rmsd_state: float = math.nan
    rmsd_positions: float = math.nan
    cpu_seconds: float = math.nan
    energy_absolute: bool = False   # set when E_0 = 0 forces an absolute energy RMSD


def rmsd_metrics(norms, energies, state_sqerrs=None, positions=None,
                 ref_positions=None, cpu_seconds: float = math.nan) -> MetricsReport:
    """Aggregate per-step observables into the trajectory metrics.

    All inputs are aligned on the main-step grid including t=0; the averages
    skip the t=0 row, where every deviation vanishes by construction.
    state_sqerrs holds ||psi_t - psi_t^ref||^2 when a quantum reference exists;
    positions/ref_positions are (steps+1, N) displacement tables for the
    classical comparison.
    """
    norms = np.asarray(norms, dtype=float)
    energies = np.asarray(energies, dtype=float)
    if norms.shape != energies.shape or norms.ndim != 1 or len(norms) < 2:
        raise ModelError("norms and energies must be equal-length per-step vectors")
    report = MetricsReport(cpu_seconds=cpu_seconds)
    report.rmsd_norm = float(np.sqrt(np.mean((norms[1:] - 1.0) ** 2)))
    e0 = energies[0]
    dev = energies[1:] - e0
    if e0 != 0.0:
        report.rmsd_energy_rel = float(np.sqrt(np.mean((dev / e0) ** 2)))
    else:
        report.rmsd_energy_rel = float(np.sqrt(np.mean(dev ** 2)))
        report.energy_absolute = True
    if state_sqerrs is not None:
        sq = np.asarray(state_sqerrs, dtype=float)
        if sq.shape != norms.shape:
            raise ModelError("state errors not aligned with the main-step grid")
        report.rmsd_state = float(np.sqrt(np.mean(sq[1:])))
    if positions is not None:
        pos = np.asarray(positions, dtype=float)
        ref = np.asarray(ref_positions, dtype=float)
        if pos.shape != ref.shape or pos.shape[0] != norms.shape[0]:
            raise ModelError("position trajectories not aligned with the main-step grid")
        report.rmsd_positions = float(np.sqrt(np.mean((pos[1:] - ref[1:]) ** 2)))
    return report
