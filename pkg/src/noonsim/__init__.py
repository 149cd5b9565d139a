"""Density-matrix simulator of coherent two-photon (N=2 N00N) absorption.

A photon pair is prepared with imperfect two-photon visibility, propagates
through lossy interferometer arms and a phase shifter, and is coherently
absorbed at a lossy beamsplitter. The package provides the Kraus channels of
every stage, an exact dilation oracle they are tested against, the
coincidence-detection and zero-photon-inference model, and closed-form
absorption bounds and N00N enhancement results.
"""

__version__ = "0.1.0"

from .analysis import EnhancementRow, FringeFit, fit_fringe, ideal_rho00, noon_absorption, rho00_bound
from .channels import (
    KrausChannel,
    LbsParams,
    LossParams,
    apply_channel,
    cptp_residual,
    lbs_channel,
    lbs_kraus_closed_form,
    loss_channel,
    lossless_bs,
    phase_shifter,
    sample_lbs_params,
)
from .detection import (
    CoincidenceCounts,
    DetectionConfig,
    DetectionProbs,
    PhotonAmplitudes,
    coincidence_total,
    detection_probs,
    infer_photon_amplitudes,
    model_coincidences,
    normalized_total,
    two_photon_rate,
)
from .errors import DomainError, InvariantError
from .experiment import (
    ExperimentConfig,
    SweepRecord,
    classical_route,
    evolve_pipeline,
    hom_with_visibility,
    loss_probabilities,
    prepare_and_hom,
    sweep_phase,
)
from .fock import (
    BASIS,
    DIM,
    basis_index,
    expectation,
    fock_density,
    index_occupation,
    mean_photon_number,
    number_operator,
    projector,
    pure_density,
    purity,
    sector_populations,
)
from .oracle import (
    dilated_mode_map,
    isometry_from_mode_map,
    kraus_from_dilation,
    lift_mode_unitary,
    loss_mode_map,
    photon_basis,
    simulate_dilation,
)

__all__ = [name for name in dir() if not name.startswith("_")]
