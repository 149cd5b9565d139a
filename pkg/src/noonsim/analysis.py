"""Closed-form results: ideal two-photon absorption, its bound, N00N-state
enhancement scaling and fringe-coefficient extraction.

For a lossy beamsplitter with single-photon absorption alpha and interference
term delta = t r* + r t*, a two-photon N00N input (|20> + e^{i 2 phi}|02>)/sqrt2
is absorbed completely with probability alpha^2 +- |delta|^2 at the extremes
of the phase, against alpha^2 for two independent single photons. With
alpha = delta = 1/2 (a thin film at its absorption maximum) the enhancement
factor is exactly 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import LbsParams
from .errors import DomainError

FIT_RANK_TOL = 1e-9


@dataclass(frozen=True)
class EnhancementRow:
    """Closed-form N-photon absorption probabilities for one parameter set."""

    n: int
    gamma: float
    delta: float
    p_noon_max: float
    p_noon_min: float
    p_independent: float


@dataclass(frozen=True)
class FringeFit:
    """Least-squares coefficients of A + B cos(2 phi) + C sin(2 phi)."""

    a: float
    b: float
    c: float
    residual: float


def ideal_rho00(params: LbsParams) -> float:
    """Two-photon absorption probability of the bare N00N input at phase zero.

        rho00 = 1/2 [ (|r - t|^2 - 1)^2 + (|r + t|^2 - 1)^2 ]

    Expanding |r +- t|^2 = 1 - alpha +- delta shows this equals
    alpha^2 + delta^2.
    """
    if not isinstance(params, LbsParams):
        raise DomainError(f"expected LbsParams, got {type(params).__name__}")
    r, t = params.r, params.t
    minus = abs(r - t) ** 2 - 1.0
    plus = abs(r + t) ** 2 - 1.0
    return 0.5 * (minus * minus + plus * plus)


def rho00_bound(alpha: float) -> float:
    """Upper bound 2 alpha^2 on the ideal two-photon absorption.

    Valid on alpha in [0, 1/2]: a thin absorbing film cannot exceed
    alpha = 1/2 for a single photon, so the bound itself never exceeds 1/2.
    """
    alpha = float(alpha)
    if not math.isfinite(alpha) or not 0.0 <= alpha <= 0.5:
        raise DomainError(f"alpha = {alpha!r} outside [0, 0.5]")
    return 2.0 * alpha * alpha


def noon_absorption(params: LbsParams, n: int) -> EnhancementRow:
    """Complete-absorption probabilities for an N-photon N00N input.

    gamma is the single-photon absorption alpha; the phase of the N00N state
    steers the probability between gamma^N + |delta|^N and gamma^N - |delta|^N,
    while N independent photons are all absorbed with probability gamma^N.
    """
    if not isinstance(params, LbsParams):
        raise DomainError(f"expected LbsParams, got {type(params).__name__}")
    if int(n) != n or n < 1:
        raise DomainError(f"photon number must be an integer >= 1, got {n!r}")
    n = int(n)
    gamma = params.alpha
    delta = params.delta
    return EnhancementRow(
        n=n,
        gamma=gamma,
        delta=delta,
        p_noon_max=gamma**n + abs(delta) ** n,
        p_noon_min=gamma**n - abs(delta) ** n,
        p_independent=gamma**n,
    )


def fit_fringe(samples) -> FringeFit:
    """Least-squares fit of (phi, value) samples to A + B cos(2 phi) + C sin(2 phi).

    The grid must contain at least three phases distinct modulo pi, otherwise
    the three coefficients are not identifiable and a DomainError is raised.
    """
    data = np.asarray(list(samples), dtype=np.float64)
    if data.ndim != 2 or data.shape[1] != 2:
        raise DomainError(f"expected (phi, value) samples, got array of shape {data.shape}")
    if not np.all(np.isfinite(data)):
        raise DomainError("fringe samples contain non-finite values")
    phis = data[:, 0]
    values = data[:, 1]
    design = np.column_stack([np.ones_like(phis), np.cos(2.0 * phis), np.sin(2.0 * phis)])
    if np.linalg.matrix_rank(design, tol=FIT_RANK_TOL) < 3:
        raise DomainError(
            "degenerate phase grid: need at least three phases distinct modulo pi"
        )
    coef, *_ = np.linalg.lstsq(design, values, rcond=None)
    residual = float(np.max(np.abs(design @ coef - values)))
    return FringeFit(a=float(coef[0]), b=float(coef[1]), c=float(coef[2]), residual=residual)
