"""Shared helpers and regression pins for the test suite."""

from __future__ import annotations

import numpy as np

from noonsim.fock import DIM

# Regression pins produced by an independent brute-force implementation of
# the same model (dilation simulated symbolically, coefficients fitted over a
# 64-point grid). Exact agreement guards against silent numerical drift; the
# physically meaningful tolerances live in the acceptance criteria.
FROZEN = {
    # default config (visibility 0.78), phi = 0
    "rho00_zero_default": 0.7251901755947515,
    "rho00_fringe_a": 0.7166102237303904,
    "rho00_fringe_b": 0.008579951864360894,
    "two_in_default": 0.45333675,
    "n0_zero_default": 0.42021784689636094,
    "n0_pi2_default": 0.3606508863134594,
    # unit-visibility fringe fits (A + B cos 2phi + C sin 2phi)
    "p11_fit": (0.0002524322228307877, 0.00025240996382843264, 0.0),
    "p20_fit": (0.0005986626046819173, 0.0001034509130677791, 0.0003202522989260733),
    "p02_fit": (0.0003294684751489327, 5.819113860062571e-05, -0.00018014191814591618),
    "p11_zero": 0.0005048421866592203,
    # closed-form two-photon absorption at the default beamsplitter
    "ideal_rho00_default": 0.3370389151883725,
}

PIN_TOL = 1e-10


def random_density(rng: np.random.Generator) -> np.ndarray:
    """Random full-rank density matrix (Wishart normalized to unit trace)."""
    g = rng.normal(size=(DIM, DIM)) + 1j * rng.normal(size=(DIM, DIM))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def max_abs(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))
