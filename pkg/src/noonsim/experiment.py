"""Full interferometer pipeline and phase sweep.

A photon pair |11> enters two arms, suffers the first loss stage, interferes
at a lossless 50:50 beamsplitter (with imperfect two-photon visibility),
suffers a second loss stage, picks up the interferometer phase on one arm and
finally hits the lossy beamsplitter where coherent two-photon absorption
happens:

    rho2 = F . U2(phi) . E_(p2,q2) . U1-with-visibility . E_(p1,q1) [ |11><11| ]

Each stage is a six-operator Kraus channel or a unitary on the truncated
two-mode space. The sweep evaluates rho2 over a phase grid and attaches the
detection and inference quantities of the `detection` module to each point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import detection as det
from .channels import LbsParams, LossParams, apply_channel, lbs_channel, loss_channel, lossless_bs, phase_shifter
from .errors import DomainError
from .fock import BASIS, assert_density_matrix, fock_density, sector_populations

PROBABILITY_SLACK = 1e-10
AMPLITUDE_SUM_TOL = 1e-9

_INTERPRETATIONS = ("loss", "transmission")


@dataclass
class ExperimentConfig:
    """Arm parameters, beamsplitter coefficients and detection efficiencies.

    The six arm values t_p1 .. t_q3 describe the three loss stages (input,
    internal, output) of arms a and b. `transmission_interpretation` controls
    their reading: "loss" takes each value directly as a loss probability,
    "transmission" takes the loss to be 1 - value. The shipped default is
    "loss", the reading singled out by the fringe-coefficient acceptance
    suite; see tests/test_acceptance.py.
    """

    t_p1: float
    t_q1: float
    t_p2: float
    t_q2: float
    t_p3: float
    t_q3: float
    lbs: LbsParams
    visibility: float
    eta_det: float
    eta_cpl: float
    transmission_interpretation: str = "loss"
    include_output_stage: bool = True
    alpha_tabulated: float | None = None
    phases: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        for name in ("t_p1", "t_q1", "t_p2", "t_q2", "t_p3", "t_q3", "visibility", "eta_det", "eta_cpl"):
            x = float(getattr(self, name))
            if not math.isfinite(x) or not 0.0 <= x <= 1.0:
                raise DomainError(f"config value {name} = {getattr(self, name)!r} outside [0, 1]")
            setattr(self, name, x)
        if not isinstance(self.lbs, LbsParams):
            raise DomainError(f"config field lbs must be LbsParams, got {type(self.lbs).__name__}")
        if self.transmission_interpretation not in _INTERPRETATIONS:
            raise DomainError(
                f"transmission_interpretation must be one of {_INTERPRETATIONS}, "
                f"got {self.transmission_interpretation!r}"
            )
        self.include_output_stage = bool(self.include_output_stage)
        if self.alpha_tabulated is not None:
            self.alpha_tabulated = float(self.alpha_tabulated)
        if self.phases is not None:
            self.phases = _validated_phase_grid(self.phases)


def _validated_phase_grid(phases) -> np.ndarray:
    grid = np.asarray(phases, dtype=np.float64).reshape(-1)
    if grid.size == 0:
        raise DomainError("phase grid must be nonempty")
    if not np.all(np.isfinite(grid)):
        raise DomainError("phase grid contains non-finite values")
    if grid.size > 1 and not np.all(np.diff(grid) > 0.0):
        raise DomainError("phase grid must be strictly increasing")
    return grid


def loss_probabilities(cfg: ExperimentConfig) -> tuple[float, float, float, float, float, float]:
    """Per-arm loss probabilities (p1, q1, p2, q2, p3, q3) under the configured reading."""
    values = (cfg.t_p1, cfg.t_q1, cfg.t_p2, cfg.t_q2, cfg.t_p3, cfg.t_q3)
    if cfg.transmission_interpretation == "loss":
        return values
    return tuple(1.0 - x for x in values)


def classical_route(rho: np.ndarray) -> np.ndarray:
    """Populations rerouted as if every photon picked an output arm at random.

    Models fully distinguishable photons at a 50:50 beamsplitter: each photon
    exits either arm with probability 1/2 independently, so a population with
    n photons spreads binomially over the n-photon sector and every coherence
    is discarded.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    out = np.zeros_like(rho)
    for i, (na, nb) in enumerate(BASIS):
        pop = rho[i, i].real
        if pop == 0.0:
            continue
        n = na + nb
        for k in range(n + 1):
            weight = math.comb(n, k) * 0.5**n
            j = BASIS.index((k, n - k))
            out[j, j] += pop * weight
    return out


def hom_with_visibility(rho: np.ndarray, visibility: float) -> np.ndarray:
    """50:50 beamsplitter with partially distinguishable photons.

    Returns v U1 rho U1^dag + (1 - v) classical_route(rho), then drops the
    one-photon coherence of the result. Lone photons surviving an upstream
    loss event carry no stable relative phase across the arms, so only their
    populations propagate; keeping the coherence would add a spurious
    first-order fringe at half the period of the two-photon signal.
    """
    v = float(visibility)
    if not math.isfinite(v) or not 0.0 <= v <= 1.0:
        raise DomainError(f"visibility {visibility!r} outside [0, 1]")
    rho = np.asarray(rho, dtype=np.complex128)
    u1 = lossless_bs()
    mixed = v * (u1 @ rho @ u1.conj().T) + (1.0 - v) * classical_route(rho)
    mixed[1, 2] = 0.0
    mixed[2, 1] = 0.0
    return mixed


def prepare_and_hom(visibility: float) -> np.ndarray:
    """State of a photon pair after the 50:50 beamsplitter.

    For v = 1 the pair bunches completely (no |11> population); for v = 0 it
    routes classically to 1/4 |20> + 1/4 |02> + 1/2 |11>; in between the two
    behaviours mix linearly, so the |11> population is (1 - v)/2.
    """
    return hom_with_visibility(fock_density(1, 1), visibility)


def _pipeline_stages(cfg: ExperimentConfig):
    p1, q1, p2, q2, _, _ = loss_probabilities(cfg)
    stage1 = loss_channel(LossParams(p1, q1))
    stage2 = loss_channel(LossParams(p2, q2))
    absorber = lbs_channel(cfg.lbs)
    return stage1, stage2, absorber


def evolve_pipeline(cfg: ExperimentConfig, phi: float) -> np.ndarray:
    """Density matrix rho2 right after the lossy beamsplitter at phase phi."""
    stage1, stage2, absorber = _pipeline_stages(cfg)
    return _evolve_with(cfg, stage1, stage2, absorber, phi)


def _evolve_with(cfg, stage1, stage2, absorber, phi) -> np.ndarray:
    rho = apply_channel(stage1, fock_density(1, 1))
    rho = hom_with_visibility(rho, cfg.visibility)
    rho = apply_channel(stage2, rho)
    u2 = phase_shifter(phi)
    rho = u2 @ rho @ u2.conj().T
    rho = apply_channel(absorber, rho)
    return assert_density_matrix(rho, context=f"pipeline output at phi={phi!r}")


@dataclass
class SweepRecord:
    """One phase point of a sweep with its detection and inference quantities."""

    phi: float
    rho2: np.ndarray
    p11: float
    p20: float
    p02: float
    c_total_norm: float
    rho00: float
    n0: float
    n1: float
    n2: float

    def __post_init__(self):
        low, high = (-PROBABILITY_SLACK, 1.0 + PROBABILITY_SLACK)
        for name in ("p11", "p20", "p02", "c_total_norm", "rho00", "n0", "n1", "n2"):
            x = float(getattr(self, name))
            if not math.isfinite(x) or not low <= x <= high:
                raise DomainError(f"sweep quantity {name} = {x!r} outside [{low}, {high}]")
            setattr(self, name, x)
        if abs(self.n0 + self.n1 + self.n2 - 1.0) > AMPLITUDE_SUM_TOL:
            raise DomainError(
                f"inferred amplitudes do not close: n0 + n1 + n2 = {self.n0 + self.n1 + self.n2!r}"
            )


def sweep_phase(cfg: ExperimentConfig, phases: Sequence[float] | None = None) -> list[SweepRecord]:
    """Evaluate the pipeline over a phase grid (cfg.phases unless overridden).

    The reference two-photon rate of the inference, measured right after the
    50:50 beamsplitter, does not depend on phi and is computed once.
    """
    if phases is None:
        phases = cfg.phases
    if phases is None:
        raise DomainError("no phase grid: set cfg.phases or pass phases explicitly")
    grid = _validated_phase_grid(phases)

    stage1, stage2, absorber = _pipeline_stages(cfg)
    det_cfg = det.DetectionConfig.from_experiment(cfg)

    rho_mid = hom_with_visibility(apply_channel(stage1, fock_density(1, 1)), cfg.visibility)
    two_in = det.two_photon_rate(rho_mid)

    records = []
    for phi in grid:
        rho2 = _evolve_with(cfg, stage1, stage2, absorber, float(phi))
        probs = det.detection_probs(rho2, det_cfg)
        amps = det.infer_photon_amplitudes(
            two_in, sector_populations(rho2)[1], det.two_photon_rate(rho2)
        )
        records.append(
            SweepRecord(
                phi=float(phi),
                rho2=rho2,
                p11=probs.p11,
                p20=probs.p20,
                p02=probs.p02,
                c_total_norm=det.normalized_total(probs),
                rho00=float(rho2[0, 0].real),
                n0=amps.n0,
                n1=amps.n1,
                n2=amps.n2,
            )
        )
    return records
