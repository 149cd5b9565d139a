"""Exact dilation reference for every channel in the simulator.

All channels here are number conserving and linear in the mode operators, so
each one has a Stinespring picture: append noise modes in vacuum, apply an
isometry generated by a linear map of creation operators, trace the noise out,

    rho' = Tr_noise[ V (rho (x) |vac><vac|) V^dag ].

The isometry is fixed entirely by a mode map M, an (m x 2) complex matrix
whose column j lists the coefficients of the image of the j-th system
creation operator over the m output creation operators,

    a_j^dag  ->  sum_k M[k, j] b_k^dag ,

and V follows by substituting this into each at-most-two-photon basis
monomial (at most 9 monomial products at this truncation, so the expansion
is done symbolically, not via permanents). Columns of M must be orthonormal;
that alone makes V an isometry on the truncated space.

This module is deliberately brute force and independent of the closed-form
channel constructors, so the two can be tested against each other.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .errors import DomainError
from .fock import BASIS, DIM, MAX_PHOTONS

ISOMETRY_TOL = 1e-12

# Kraus operators are returned through channels.KrausChannel; the import is
# deferred inside kraus_from_dilation because channels builds on this module.


def photon_basis(n_modes: int, max_total: int = MAX_PHOTONS) -> list[tuple[int, ...]]:
    """Occupation tuples of n_modes with at most max_total photons, grouped by total.

    The ordering is internal to this module; system-facing results are always
    reported in the fixed two-mode basis order of `fock`.
    """
    if n_modes < 1:
        raise DomainError(f"need at least one mode, got {n_modes!r}")
    out: list[tuple[int, ...]] = []
    for total in range(max_total + 1):
        for occ in itertools.product(range(max_total + 1), repeat=n_modes):
            if sum(occ) == total:
                out.append(occ)
    return out


def _require_mode_map(mode_map, tol: float = ISOMETRY_TOL) -> np.ndarray:
    M = np.asarray(mode_map, dtype=np.complex128)
    if M.ndim != 2 or M.shape[1] != 2 or M.shape[0] < 2:
        raise DomainError(f"mode map must be (m x 2) with m >= 2, got shape {M.shape}")
    if not (np.all(np.isfinite(M.real)) and np.all(np.isfinite(M.imag))):
        raise DomainError("mode map contains non-finite entries")
    defect = float(np.max(np.abs(M.conj().T @ M - np.eye(2))))
    if defect > tol:
        raise DomainError(f"mode map is not an isometry: max |M^dag M - I| = {defect:.3e}")
    return M


def _monomial_amplitudes(M: np.ndarray, occ_in: tuple[int, ...]) -> dict[tuple[int, ...], complex]:
    """Output-basis amplitudes of the image of the normalized |occ_in> monomial."""
    m = M.shape[0]
    poly: dict[tuple[int, ...], complex] = {(0,) * m: 1.0 + 0.0j}
    for j, n in enumerate(occ_in):
        for _ in range(n):
            grown: dict[tuple[int, ...], complex] = {}
            for occ, coef in poly.items():
                for k in range(m):
                    c = M[k, j]
                    if c == 0:
                        continue
                    nxt = list(occ)
                    nxt[k] += 1
                    key = tuple(nxt)
                    grown[key] = grown.get(key, 0.0 + 0.0j) + coef * c
            poly = grown
    # factorials restore Fock normalization on both sides of the substitution
    norm_in = math.sqrt(math.prod(math.factorial(n) for n in occ_in))
    return {
        occ: coef * math.sqrt(math.prod(math.factorial(k) for k in occ)) / norm_in
        for occ, coef in poly.items()
    }


def isometry_from_mode_map(mode_map) -> np.ndarray:
    """V as a (dim_ext x 6) matrix: extended rows, system columns in basis order."""
    M = _require_mode_map(mode_map)
    ext = photon_basis(M.shape[0])
    ext_index = {occ: i for i, occ in enumerate(ext)}
    V = np.zeros((len(ext), DIM), dtype=np.complex128)
    for col, occ_in in enumerate(BASIS):
        for occ, amp in _monomial_amplitudes(M, occ_in).items():
            V[ext_index[occ], col] = amp
    return V


def simulate_dilation(rho: np.ndarray, mode_map) -> np.ndarray:
    """Channel output via the explicit dilation: lift with V, trace the noise modes."""
    M = _require_mode_map(mode_map)
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (DIM, DIM):
        raise DomainError(f"density matrix has shape {rho.shape}, expected ({DIM}, {DIM})")
    V = isometry_from_mode_map(M)
    rho_ext = V @ rho @ V.conj().T
    ext_index = {occ: i for i, occ in enumerate(photon_basis(M.shape[0]))}
    n_noise = M.shape[0] - 2
    noise_occs = photon_basis(n_noise) if n_noise else [()]
    out = np.zeros((DIM, DIM), dtype=np.complex128)
    for n_occ in noise_occs:
        extra = sum(n_occ)
        for i, si in enumerate(BASIS):
            if sum(si) + extra > MAX_PHOTONS:
                continue
            for j, sj in enumerate(BASIS):
                if sum(sj) + extra > MAX_PHOTONS:
                    continue
                out[i, j] += rho_ext[ext_index[si + n_occ], ext_index[sj + n_occ]]
    return out


def kraus_from_dilation(mode_map, label: str = "dilation"):
    """Kraus operators K_n = <n_noise| V |vac_noise> for the six noise occupations.

    The noise occupations are enumerated in the same fixed order as the system
    basis, so operator n tells which (n_c, n_d) photons leaked to the noise
    modes. Completeness holds by construction because V is an isometry.
    """
    M = _require_mode_map(mode_map)
    if M.shape[0] != 4:
        raise DomainError(f"Kraus extraction expects two noise modes (4 x 2 map), got shape {M.shape}")
    V = isometry_from_mode_map(M)
    ext_index = {occ: i for i, occ in enumerate(photon_basis(4))}
    operators = []
    for n_occ in BASIS:
        K = np.zeros((DIM, DIM), dtype=np.complex128)
        for i, si in enumerate(BASIS):
            full = si + n_occ
            if sum(full) <= MAX_PHOTONS:
                K[i, :] = V[ext_index[full], :]
        operators.append(K)
    from .channels import KrausChannel  # deferred: channels builds on this module

    return KrausChannel(operators=operators, label=label)


def lift_mode_unitary(mode_map_2x2) -> np.ndarray:
    """Lift a unitary 2x2 mode map to its 6x6 action on the truncated Fock space."""
    M = _require_mode_map(mode_map_2x2)
    if M.shape != (2, 2):
        raise DomainError(f"unitary lift expects a 2 x 2 map, got shape {M.shape}")
    U = np.zeros((DIM, DIM), dtype=np.complex128)
    for col, occ_in in enumerate(BASIS):
        for occ, amp in _monomial_amplitudes(M, occ_in).items():
            U[BASIS.index(occ), col] = amp
    return U


def dilated_mode_map(params) -> np.ndarray:
    """Four-mode dilation of the lossy beamsplitter.

    Columns (images of a^dag, b^dag over a, b and noise modes c, d):

        (t, r, u, v)  and  (r, t, u, -v),
        u = sqrt((alpha - delta) / 2),  v = sqrt((alpha + delta) / 2),

    with alpha = 1 - |r|^2 - |t|^2 and delta = t r* + r t*. Physicality
    |delta| <= alpha makes both square roots real and the columns orthonormal:
    each has norm (1 - alpha) + alpha and their overlap is delta + u^2 - v^2 = 0.
    """
    r = complex(params.r)
    t = complex(params.t)
    alpha = 1.0 - abs(r) ** 2 - abs(t) ** 2
    delta = 2.0 * (t * r.conjugate()).real
    if alpha < -ISOMETRY_TOL:
        raise DomainError(f"|r|^2 + |t|^2 = {abs(r) ** 2 + abs(t) ** 2!r} exceeds 1")
    if abs(delta) > alpha + ISOMETRY_TOL:
        raise DomainError(
            "unphysical beamsplitter: passivity needs 2 t r0 |cos(theta)| <= alpha, "
            f"i.e. |t r* + r t*| <= 1 - |r|^2 - |t|^2 (got |delta| = {abs(delta)!r}, alpha = {alpha!r})"
        )
    u = math.sqrt(max((alpha - delta) / 2.0, 0.0))
    v = math.sqrt(max((alpha + delta) / 2.0, 0.0))
    return np.array([[t, r], [r, t], [u, u], [v, -v]], dtype=np.complex128)


def loss_mode_map(params) -> np.ndarray:
    """Four-mode dilation of independent per-arm loss.

    Columns: (sqrt(1-p), 0, sqrt(p), 0) and (0, sqrt(1-q), 0, sqrt(q)); each
    arm couples to its own noise mode, so the two losses commute.
    """
    p = float(params.p)
    q = float(params.q)
    if not (0.0 <= p <= 1.0) or not (0.0 <= q <= 1.0):
        raise DomainError(f"loss probabilities must lie in [0, 1], got p={p!r}, q={q!r}")
    return np.array(
        [
            [math.sqrt(1.0 - p), 0.0],
            [0.0, math.sqrt(1.0 - q)],
            [math.sqrt(p), 0.0],
            [0.0, math.sqrt(q)],
        ],
        dtype=np.complex128,
    )
