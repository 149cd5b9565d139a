"""Detection model: output losses, coincidence counting and photon-number inference.

The two output arms each end in a 50:50 fiber splitter feeding two detectors
(A, B on one arm, C, D on the other). A two-photon event is seen as a
coincidence; which detector pair fires depends on how the photons split:

* both photons in one arm reach distinct detectors with probability 1/2,
  so p20 and p02 carry a pairing factor 1/2;
* one photon per arm lands on any of the four cross pairs with probability
  1/4 each, so p11 carries a pairing factor 1/4 in total.

The weighted total

    c_total = 2 (C_AB + C_CD) + (C_AC + C_AD + C_BC + C_BD)

undoes those pairing factors, so per input pair it recovers the bare
two-photon population reachable by the detectors. The zero-photon inference
compares that rate after the absorber against the same rate measured right
after the 50:50 beamsplitter, together with the one-photon rate:

    n0 = (two_in - one_out - two_out) / two_in .
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import LossParams, apply_channel, loss_channel
from .errors import DomainError
from .fock import DIM

AMPLITUDE_SLACK = 1e-9


@dataclass(frozen=True)
class DetectionConfig:
    """Output-stage losses and detector efficiencies.

    loss_a and loss_b act on arms a and b after the absorber when
    include_output_stage is set; eta_det and eta_cpl scale coincidence rates
    only and never enter the subspace probabilities.
    """

    loss_a: float
    loss_b: float
    eta_det: float = 1.0
    eta_cpl: float = 1.0
    include_output_stage: bool = True

    def __post_init__(self):
        for name in ("loss_a", "loss_b", "eta_det", "eta_cpl"):
            x = float(getattr(self, name))
            if not math.isfinite(x) or not 0.0 <= x <= 1.0:
                raise DomainError(f"detection parameter {name} = {getattr(self, name)!r} outside [0, 1]")
            object.__setattr__(self, name, x)
        object.__setattr__(self, "include_output_stage", bool(self.include_output_stage))

    @classmethod
    def from_experiment(cls, cfg) -> "DetectionConfig":
        """Detection stage matching the experiment wiring.

        The output arms feed the detector ports in crossed order: arm a sees
        the q3 loss and arm b the p3 loss. The fringe-coefficient acceptance
        suite singles this wiring out against the straight assignment.
        The interpretation of the raw arm values is re-derived here rather
        than imported from `experiment`, which builds on this module.
        """
        values = (cfg.t_p3, cfg.t_q3)
        if cfg.transmission_interpretation == "loss":
            p3, q3 = values
        else:
            p3, q3 = (1.0 - x for x in values)
        return cls(
            loss_a=q3,
            loss_b=p3,
            eta_det=cfg.eta_det,
            eta_cpl=cfg.eta_cpl,
            include_output_stage=cfg.include_output_stage,
        )

    @classmethod
    def lossless(cls) -> "DetectionConfig":
        """Ideal stage: no output loss, unit efficiencies."""
        return cls(loss_a=0.0, loss_b=0.0)


@dataclass(frozen=True)
class DetectionProbs:
    """Pairing-weighted coincidence probabilities per input pair."""

    p11: float
    p20: float
    p02: float


@dataclass(frozen=True)
class CoincidenceCounts:
    """Coincidence rates of the six detector pairs."""

    c_ab: float
    c_cd: float
    c_ac: float
    c_ad: float
    c_bc: float
    c_bd: float

    def __post_init__(self):
        for name in ("c_ab", "c_cd", "c_ac", "c_ad", "c_bc", "c_bd"):
            x = float(getattr(self, name))
            if not math.isfinite(x) or x < 0.0:
                raise DomainError(f"coincidence count {name} = {getattr(self, name)!r} must be >= 0")
            object.__setattr__(self, name, x)


@dataclass(frozen=True)
class PhotonAmplitudes:
    """Inferred populations of the zero-, one- and two-photon output subspaces."""

    n0: float
    n1: float
    n2: float

    def __post_init__(self):
        for name in ("n0", "n1", "n2"):
            x = float(getattr(self, name))
            if not math.isfinite(x) or not -AMPLITUDE_SLACK <= x <= 1.0 + AMPLITUDE_SLACK:
                raise DomainError(f"photon amplitude {name} = {getattr(self, name)!r} outside [0, 1]")
            object.__setattr__(self, name, x)


def detection_probs(rho2: np.ndarray, cfg: DetectionConfig) -> DetectionProbs:
    """Coincidence probabilities p11 = <11|rho'|11>/4, p20 = <20|rho'|20>/2, p02 = <02|rho'|02>/2.

    rho' is rho2 after the output-stage loss channel when enabled, otherwise
    rho2 itself. Detector efficiencies do not enter here.
    """
    rho = np.asarray(rho2, dtype=np.complex128)
    if rho.shape != (DIM, DIM):
        raise DomainError(f"density matrix has shape {rho.shape}, expected ({DIM}, {DIM})")
    if cfg.include_output_stage:
        rho = apply_channel(loss_channel(LossParams(cfg.loss_a, cfg.loss_b)), rho)
    return DetectionProbs(
        p11=0.25 * float(rho[3, 3].real),
        p20=0.5 * float(rho[4, 4].real),
        p02=0.5 * float(rho[5, 5].real),
    )


def model_coincidences(probs: DetectionProbs, cfg: DetectionConfig, pair_rate: float = 1.0) -> CoincidenceCounts:
    """Forward model from coincidence probabilities to detector-pair rates.

    Every coincidence needs both photons detected and coupled, so all six
    rates scale by eta_det^2 eta_cpl^2 and by the input pair rate. The four
    cross pairs split the one-per-arm probability uniformly.
    """
    rate = float(pair_rate)
    if not math.isfinite(rate) or rate < 0.0:
        raise DomainError(f"pair_rate must be >= 0, got {pair_rate!r}")
    scale = rate * cfg.eta_det**2 * cfg.eta_cpl**2
    cross = scale * probs.p11 / 4.0
    return CoincidenceCounts(
        c_ab=scale * probs.p20,
        c_cd=scale * probs.p02,
        c_ac=cross,
        c_ad=cross,
        c_bc=cross,
        c_bd=cross,
    )


def coincidence_total(counts: CoincidenceCounts) -> float:
    """Weighted total 2 (C_AB + C_CD) + (C_AC + C_AD + C_BC + C_BD).

    The factor 2 on the same-arm pairs compensates the 1/2 chance of both
    photons reaching distinct detectors behind one fiber splitter.
    """
    return (
        2.0 * (counts.c_ab + counts.c_cd)
        + counts.c_ac
        + counts.c_ad
        + counts.c_bc
        + counts.c_bd
    )


def normalized_total(probs: DetectionProbs) -> float:
    """Weighted coincidence total per input pair with efficiency factors removed.

    Equals coincidence_total(model_coincidences(probs, cfg, rate)) divided by
    rate eta_det^2 eta_cpl^2, which collapses to 2 (p20 + p02) + p11.
    """
    return 2.0 * (probs.p20 + probs.p02) + probs.p11


def two_photon_rate(rho: np.ndarray) -> float:
    """Pairing-weighted two-photon detection rate of a state, ideal stage.

    This is normalized_total of the lossless-stage probabilities, written out:
    <20|rho|20> + <02|rho|02> + <11|rho|11>/4. It is the rate the coincidence
    protocol attributes to the two-photon subspace, not its bare population:
    the |11> component keeps the 1/4 pairing weight.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (DIM, DIM):
        raise DomainError(f"density matrix has shape {rho.shape}, expected ({DIM}, {DIM})")
    return float(rho[4, 4].real + rho[5, 5].real + 0.25 * rho[3, 3].real)


def infer_photon_amplitudes(two_in: float, one_out: float, two_out: float) -> PhotonAmplitudes:
    """Zero-photon inference n0 = (two_in - one_out - two_out) / two_in.

    two_in is the two-photon rate entering the absorber (measured after the
    50:50 beamsplitter), one_out and two_out the surviving one- and
    two-photon rates; n1 and n2 are the same rates normalized by two_in.
    """
    two_in = float(two_in)
    one_out = float(one_out)
    two_out = float(two_out)
    if not math.isfinite(two_in) or two_in <= 0.0:
        raise DomainError(f"two_in must be positive, got {two_in!r}")
    return PhotonAmplitudes(
        n0=(two_in - one_out - two_out) / two_in,
        n1=one_out / two_in,
        n2=two_out / two_in,
    )
