"""Quantum channels of the two-photon absorption experiment.

Three channel families act on the truncated two-mode space:

* independent per-arm photon loss (six Kraus operators, closed form),
* the lossy beamsplitter, where absorbed photons leave to noise modes
  (six Kraus operators, generated from the exact dilation),
* unitaries: the lossless 50:50 beamsplitter and the per-mode phase shifter.

The lossy-beamsplitter constructor of record is the dilation in `oracle`,
which is unambiguous for complex r; a hand-derived closed form is recomputed
on every construction and compared entrywise, so the two derivations keep
each other honest.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import oracle
from .errors import DomainError, InvariantError
from .fock import DIM

Kraus = list[np.ndarray]

COMPLETENESS_TOL = 1e-10
PHYSICALITY_TOL = 1e-12
CROSS_CHECK_TOL = 1e-9


@dataclass(frozen=True)
class LossParams:
    """Per-arm photon loss probabilities (arm a loses with p, arm b with q)."""

    p: float
    q: float

    def __post_init__(self):
        for name in ("p", "q"):
            x = float(getattr(self, name))
            if not math.isfinite(x) or not 0.0 <= x <= 1.0:
                raise DomainError(f"loss probability {name} = {getattr(self, name)!r} outside [0, 1]")
            object.__setattr__(self, name, x)


@dataclass(frozen=True)
class LbsParams:
    """Reflection and transmission coefficients of the lossy beamsplitter.

    Physicality requires |r|^2 + |t|^2 <= 1 and, writing alpha for the
    single-photon absorption 1 - |r|^2 - |t|^2, the passivity condition
    2 t r0 |cos(theta)| <= alpha with r = r0 e^{i theta}, i.e.
    |t r* + r t*| <= alpha. Violating it would need noise-mode couplings
    with negative spectral weight.
    """

    r: complex
    t: complex

    def __post_init__(self):
        r = complex(self.r)
        t = complex(self.t)
        if not (cmath.isfinite(r) and cmath.isfinite(t)):
            raise DomainError(f"beamsplitter coefficients must be finite, got r={self.r!r}, t={self.t!r}")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "t", t)
        alpha = 1.0 - abs(r) ** 2 - abs(t) ** 2
        if alpha < -PHYSICALITY_TOL:
            raise DomainError(f"|r|^2 + |t|^2 = {abs(r) ** 2 + abs(t) ** 2!r} exceeds 1")
        delta = 2.0 * (t * r.conjugate()).real
        if abs(delta) > alpha + PHYSICALITY_TOL:
            raise DomainError(
                "unphysical beamsplitter: passivity needs 2 t r0 |cos(theta)| <= alpha, "
                f"i.e. |t r* + r t*| <= 1 - |r|^2 - |t|^2 (got |delta| = {abs(delta)!r}, alpha = {alpha!r})"
            )

    @property
    def alpha(self) -> float:
        """Single-photon absorption 1 - |r|^2 - |t|^2."""
        return 1.0 - abs(self.r) ** 2 - abs(self.t) ** 2

    @property
    def delta(self) -> float:
        """Interference term t r* + r t* (real by construction)."""
        return 2.0 * (self.t * self.r.conjugate()).real


@dataclass
class KrausChannel:
    """An ordered Kraus operator set with a family label (loss | lbs | unitary | dilation).

    Construction does not validate completeness; `apply_channel` and
    `cptp_residual` do, so a corrupted operator set is caught at use.
    """

    operators: Kraus
    label: str = "channel"

    def __post_init__(self):
        ops = [np.asarray(K, dtype=np.complex128) for K in self.operators]
        for K in ops:
            if K.shape != (DIM, DIM):
                raise DomainError(f"Kraus operator has shape {K.shape}, expected ({DIM}, {DIM})")
        self.operators = ops


def cptp_residual(channel: KrausChannel) -> float:
    """Max-norm completeness defect |sum_i K_i^dag K_i - I|."""
    s = np.zeros((DIM, DIM), dtype=np.complex128)
    for K in channel.operators:
        s += K.conj().T @ K
    return float(np.max(np.abs(s - np.eye(DIM))))


def apply_channel(channel: KrausChannel, rho: np.ndarray) -> np.ndarray:
    """rho -> sum_i K_i rho K_i^dag, guarded by the completeness check."""
    res = cptp_residual(channel)
    if res > COMPLETENESS_TOL:
        raise InvariantError(
            f"channel '{channel.label}' is not trace preserving: completeness residual {res:.3e}"
        )
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (DIM, DIM):
        raise DomainError(f"density matrix has shape {rho.shape}, expected ({DIM}, {DIM})")
    out = np.zeros((DIM, DIM), dtype=np.complex128)
    for K in channel.operators:
        out += K @ rho @ K.conj().T
    return out


def loss_channel(params: LossParams) -> KrausChannel:
    """Kraus set of independent per-arm photon loss.

    With survival amplitudes s_p = sqrt(1-p), s_q = sqrt(1-q) the six
    operators, indexed by the photons (n_c, n_d) lost from arms a and b, are

        E_(0,0) = diag(1, s_p, s_q, s_p s_q, 1-p, 1-q)
        E_(1,0): |10> -> sqrt(p)|00>,  |11> -> sqrt(p) s_q |01>,  |20> -> sqrt(2p) s_p |10>
        E_(0,1): |01> -> sqrt(q)|00>,  |11> -> sqrt(q) s_p |10>,  |02> -> sqrt(2q) s_q |01>
        E_(1,1): |11> -> sqrt(p q)|00>
        E_(2,0): |20> -> p |00>
        E_(0,2): |02> -> q |00>

    The set is exactly trace preserving for any p, q in [0, 1] and agrees
    with the dilation of `oracle.loss_mode_map` entrywise.
    """
    if not isinstance(params, LossParams):
        params = LossParams(*params)
    p, q = params.p, params.q
    sp = math.sqrt(1.0 - p)
    sq = math.sqrt(1.0 - q)
    e00 = np.diag([1.0, sp, sq, sp * sq, 1.0 - p, 1.0 - q]).astype(np.complex128)
    e10 = np.zeros((DIM, DIM), dtype=np.complex128)
    e10[0, 1] = math.sqrt(p)
    e10[2, 3] = math.sqrt(p) * sq
    e10[1, 4] = math.sqrt(2.0 * p) * sp
    e01 = np.zeros((DIM, DIM), dtype=np.complex128)
    e01[0, 2] = math.sqrt(q)
    e01[1, 3] = math.sqrt(q) * sp
    e01[2, 5] = math.sqrt(2.0 * q) * sq
    e11 = np.zeros((DIM, DIM), dtype=np.complex128)
    e11[0, 3] = math.sqrt(p * q)
    e20 = np.zeros((DIM, DIM), dtype=np.complex128)
    e20[0, 4] = p
    e02 = np.zeros((DIM, DIM), dtype=np.complex128)
    e02[0, 5] = q
    return KrausChannel(operators=[e00, e10, e01, e11, e20, e02], label="loss")


def lbs_kraus_closed_form(params: LbsParams) -> Kraus:
    """Hand-derived Kraus set of the lossy beamsplitter.

    With alpha = 1 - |r|^2 - |t|^2, delta = t r* + r t*, u = sqrt((alpha-delta)/2)
    and v = sqrt((alpha+delta)/2), the operators indexed by the noise
    occupation (n_c, n_d) act as

        F_(0,0): |00> -> |00>; one-photon block [[t, r], [r, t]];
                 two-photon block over (|11>, |20>, |02>)
                     [[t^2 + r^2, s t r, s t r],
                      [s t r,     t^2,   r^2 ],
                      [s t r,     r^2,   t^2 ]]          (s = sqrt 2)
        F_(1,0): |10>, |01> -> u |00>;  |11> -> u (t + r)(|10> + |01>);
                 |20> -> s u (t|10> + r|01>);  |02> -> s u (r|10> + t|01>)
        F_(0,1): |10> -> v |00>, |01> -> -v |00>;  |11> -> v (r - t)(|10> - |01>);
                 |20> -> s v (t|10> + r|01>);  |02> -> -s v (r|10> + t|01>)
        F_(1,1): |20> -> s u v |00>;  |02> -> -s u v |00>
        F_(2,0): |11> -> s u^2 |00>;  |20>, |02> -> u^2 |00>
        F_(0,2): |11> -> -s v^2 |00>;  |20>, |02> -> v^2 |00>

    No coefficient is conjugated: the noise couplings u, v are real and the
    system coefficients enter the substitution directly.
    """
    if not isinstance(params, LbsParams):
        raise DomainError(f"expected LbsParams, got {type(params).__name__}")
    r, t = params.r, params.t
    alpha, delta = params.alpha, params.delta
    u = math.sqrt(max((alpha - delta) / 2.0, 0.0))
    v = math.sqrt(max((alpha + delta) / 2.0, 0.0))
    s = math.sqrt(2.0)

    f00 = np.zeros((DIM, DIM), dtype=np.complex128)
    f00[0, 0] = 1.0
    f00[1, 1] = t
    f00[1, 2] = r
    f00[2, 1] = r
    f00[2, 2] = t
    f00[3, 3] = t * t + r * r
    f00[3, 4] = s * t * r
    f00[3, 5] = s * t * r
    f00[4, 3] = s * t * r
    f00[4, 4] = t * t
    f00[4, 5] = r * r
    f00[5, 3] = s * t * r
    f00[5, 4] = r * r
    f00[5, 5] = t * t

    f10 = np.zeros((DIM, DIM), dtype=np.complex128)
    f10[0, 1] = u
    f10[0, 2] = u
    f10[1, 3] = u * (t + r)
    f10[2, 3] = u * (t + r)
    f10[1, 4] = s * u * t
    f10[2, 4] = s * u * r
    f10[1, 5] = s * u * r
    f10[2, 5] = s * u * t

    f01 = np.zeros((DIM, DIM), dtype=np.complex128)
    f01[0, 1] = v
    f01[0, 2] = -v
    f01[1, 3] = v * (r - t)
    f01[2, 3] = -v * (r - t)
    f01[1, 4] = s * v * t
    f01[2, 4] = s * v * r
    f01[1, 5] = -s * v * r
    f01[2, 5] = -s * v * t

    f11 = np.zeros((DIM, DIM), dtype=np.complex128)
    f11[0, 4] = s * u * v
    f11[0, 5] = -s * u * v

    f20 = np.zeros((DIM, DIM), dtype=np.complex128)
    f20[0, 3] = s * u * u
    f20[0, 4] = u * u
    f20[0, 5] = u * u

    f02 = np.zeros((DIM, DIM), dtype=np.complex128)
    f02[0, 3] = -s * v * v
    f02[0, 4] = v * v
    f02[0, 5] = v * v

    return [f00, f10, f01, f11, f20, f02]


def lbs_channel(params: LbsParams) -> KrausChannel:
    """Lossy-beamsplitter channel, generated from the exact dilation.

    The dilation output is cross-checked entrywise against
    `lbs_kraus_closed_form`; a disagreement above 1e-9 raises, because the
    two constructions are algebraically identical and any gap means a bug.
    """
    if not isinstance(params, LbsParams):
        raise DomainError(f"expected LbsParams, got {type(params).__name__}")
    channel = oracle.kraus_from_dilation(oracle.dilated_mode_map(params), label="lbs")
    reference = lbs_kraus_closed_form(params)
    dev = max(
        float(np.max(np.abs(K - R))) for K, R in zip(channel.operators, reference)
    )
    if dev > CROSS_CHECK_TOL:
        raise InvariantError(
            f"lossy-beamsplitter constructions disagree: max entrywise deviation {dev:.3e}"
        )
    return channel


def lossless_bs(convention: str = "i") -> np.ndarray:
    """Unitary of the lossless 50:50 beamsplitter on the truncated space.

    convention "i" uses the symmetric phase choice a^dag -> (a^dag + i b^dag)/sqrt2,
    b^dag -> (i a^dag + b^dag)/sqrt2; "real" uses (a^dag + b^dag)/sqrt2,
    (a^dag - b^dag)/sqrt2. Swept observables agree between the two up to a
    fixed shift of the phase origin.
    """
    if convention == "i":
        m2 = np.array([[1.0, 1.0j], [1.0j, 1.0]], dtype=np.complex128) / math.sqrt(2.0)
    elif convention == "real":
        m2 = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / math.sqrt(2.0)
    else:
        raise DomainError(f"unknown beamsplitter convention {convention!r}; use 'i' or 'real'")
    return oracle.lift_mode_unitary(m2)


def phase_shifter(phi: float) -> np.ndarray:
    """Diagonal unitary putting phase phi on every photon in mode b.

    Entries (1, 1, e^{i phi}, e^{i phi}, 1, e^{2 i phi}) in basis order; a
    two-photon superposition of |20> and |02> therefore acquires the doubled
    phase 2 phi.
    """
    phi = float(phi)
    if not math.isfinite(phi):
        raise DomainError(f"phase must be finite, got {phi!r}")
    e1 = cmath.exp(1j * phi)
    return np.diag([1.0, 1.0, e1, e1, 1.0, e1 * e1]).astype(np.complex128)


def sample_lbs_params(rng: np.random.Generator, alpha_max: float = 1.0) -> LbsParams:
    """Rejection-sample physical beamsplitter coefficients with alpha <= alpha_max."""
    alpha_max = float(alpha_max)
    if not 0.0 < alpha_max <= 1.0:
        raise DomainError(f"alpha_max must lie in (0, 1], got {alpha_max!r}")
    while True:
        x = rng.uniform(-1.0, 1.0, size=4)
        r = complex(x[0], x[1])
        t = complex(x[2], x[3])
        alpha = 1.0 - abs(r) ** 2 - abs(t) ** 2
        if alpha < 0.0 or alpha > alpha_max:
            continue
        delta = 2.0 * (t * r.conjugate()).real
        if abs(delta) > alpha:
            continue
        return LbsParams(r=r, t=t)
