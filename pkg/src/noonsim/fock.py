"""Truncated two-mode Fock space.

Everything in this package lives in the six-dimensional space of two bosonic
modes a, b holding at most two photons in total, with the fixed basis order

    |00>, |10>, |01>, |11>, |20>, |02>

where |n_a n_b> counts photons per mode. All matrices in this package assume
this order; note in particular that the one-photon pair is |10> before |01>.
Sectors of total photon number (0, 1, 2) occupy index ranges {0}, {1, 2} and
{3, 4, 5}, so number-conserving maps are block diagonal in this basis.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError, InvariantError

BASIS: tuple[tuple[int, int], ...] = ((0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2))
INDEX: dict[tuple[int, int], int] = {occ: i for i, occ in enumerate(BASIS)}
DIM = 6
MAX_PHOTONS = 2

# module-wide default tolerances
HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-10
PSD_TOL = 1e-10


def basis_index(n_a: int, n_b: int) -> int:
    """Linear index of |n_a n_b> in the fixed basis order."""
    key = (int(n_a), int(n_b))
    if key != (n_a, n_b):
        raise DomainError(f"occupation numbers must be integers, got ({n_a!r}, {n_b!r})")
    if key not in INDEX:
        raise DomainError(
            f"occupation ({n_a}, {n_b}) outside the truncation: need n_a, n_b >= 0 and n_a + n_b <= {MAX_PHOTONS}"
        )
    return INDEX[key]


def index_occupation(index: int) -> tuple[int, int]:
    """Inverse of basis_index."""
    if index not in range(DIM):
        raise DomainError(f"basis index {index!r} outside 0..{DIM - 1}")
    return BASIS[index]


def projector(index: int) -> np.ndarray:
    """Rank-1 projector |i><i| onto the index-th basis state."""
    if index not in range(DIM):
        raise DomainError(f"basis index {index!r} outside 0..{DIM - 1}")
    out = np.zeros((DIM, DIM), dtype=np.complex128)
    out[index, index] = 1.0
    return out


def fock_density(n_a: int, n_b: int) -> np.ndarray:
    """Density matrix of the number state |n_a n_b>."""
    return projector(basis_index(n_a, n_b))


def pure_density(amplitudes, tol: float = 1e-12) -> np.ndarray:
    """Density matrix |psi><psi| of a normalized six-component pure state."""
    psi = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
    if psi.shape != (DIM,):
        raise DomainError(f"pure state needs {DIM} amplitudes, got shape {psi.shape}")
    norm = float(np.sum(np.abs(psi) ** 2))
    if abs(norm - 1.0) > tol:
        raise DomainError(f"pure state not normalized: sum |c_i|^2 = {norm!r}")
    return np.outer(psi, psi.conj())


def expectation(rho: np.ndarray, op: np.ndarray, tol: float = HERMITICITY_TOL) -> float:
    """Tr[op rho] for a Hermitian operator, returned as a real number."""
    rho = np.asarray(rho, dtype=np.complex128)
    op = np.asarray(op, dtype=np.complex128)
    if rho.shape != (DIM, DIM) or op.shape != (DIM, DIM):
        raise DomainError(f"expected {DIM}x{DIM} matrices, got {rho.shape} and {op.shape}")
    if np.max(np.abs(op - op.conj().T)) > tol:
        raise DomainError("expectation requires a Hermitian operator")
    return float(np.trace(op @ rho).real)


def number_operator() -> np.ndarray:
    """Total photon number N = sum_i (n_a + n_b) |i><i|."""
    return np.diag([float(na + nb) for na, nb in BASIS]).astype(np.complex128)


def sector_populations(rho: np.ndarray) -> tuple[float, float, float]:
    """Populations of the zero-, one- and two-photon sectors."""
    rho = np.asarray(rho)
    p0 = float(rho[0, 0].real)
    p1 = float(rho[1, 1].real + rho[2, 2].real)
    p2 = float(rho[3, 3].real + rho[4, 4].real + rho[5, 5].real)
    return p0, p1, p2


def mean_photon_number(rho: np.ndarray) -> float:
    """<N> = 0*p0 + 1*p1 + 2*p2."""
    _, p1, p2 = sector_populations(rho)
    return p1 + 2.0 * p2


def purity(rho: np.ndarray) -> float:
    """Tr[rho^2]."""
    rho = np.asarray(rho, dtype=np.complex128)
    return float(np.trace(rho @ rho).real)


def assert_density_matrix(
    rho: np.ndarray,
    herm_tol: float = HERMITICITY_TOL,
    trace_tol: float = TRACE_TOL,
    psd_tol: float = PSD_TOL,
    context: str = "",
) -> np.ndarray:
    """Raise InvariantError unless rho is Hermitian, unit trace and PSD within tolerance."""
    rho = np.asarray(rho, dtype=np.complex128)
    where = f" ({context})" if context else ""
    if rho.shape != (DIM, DIM):
        raise InvariantError(f"density matrix has shape {rho.shape}, expected ({DIM}, {DIM}){where}")
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    if herm > herm_tol:
        raise InvariantError(f"density matrix not Hermitian: max |rho - rho^dag| = {herm:.3e}{where}")
    tr = float(np.trace(rho).real)
    if abs(tr - 1.0) > trace_tol:
        raise InvariantError(f"density matrix trace {tr!r} differs from 1 by more than {trace_tol:g}{where}")
    eigmin = float(np.min(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))))
    if eigmin < -psd_tol:
        raise InvariantError(f"density matrix not PSD: smallest eigenvalue {eigmin:.3e}{where}")
    return rho
