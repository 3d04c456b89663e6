"""Leading-order signalling between two sharply switched, gapless detectors
in the cold-matter (alpha = 3/2) universe.

Alice (A) either couples or not; Bob (B) reads the change of his excitation
probability, S2 * lambda_A * lambda_B.  S2 depends only on the field
commutator and splits into a light-cone part ``S_delta`` and a timelike
interior part ``S_theta``.  The six causal cases classify how B's window
sits relative to A's light-cone crossing at comoving distance R::

    1  B ends before A's earliest signal arrives       (no contact)
    2  B starts before, ends inside the crossing band
    3  B lies within the crossing band
    4  B starts inside, ends after the crossing band
    5  B starts after A's latest signal arrives         (interior only)
    6  B contains the whole crossing band

Sign convention: see :mod:`huygens.commutator`.  With the optimal states,
S2 is positive.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

from ._backend import kernels
from .cosmo import ConformalWindow, CosmologyParams
from .errors import DegenerateReceiverError, DomainError, UnsupportedCosmologyError

__all__ = [
    "CausalCase",
    "ConformalWindow",
    "DetectorSpec",
    "DetectorState",
    "SignalBreakdown",
    "classify_case",
    "z_bounds",
    "s_delta",
    "s_theta",
    "state_prefactor",
    "signal_breakdown",
    "s2",
    "channel_capacity",
    "optimal_detector_states",
]

NORM_TOL = 1e-12


class CausalCase(enum.IntEnum):
    NO_CONTACT = 1
    ENTERS = 2
    INSIDE = 3
    LEAVES = 4
    TIMELIKE = 5
    CONTAINS = 6


class DetectorState(NamedTuple):
    """Initial detector state ``amp_excited |e> + amp_ground |g>``."""

    amp_excited: complex
    amp_ground: complex


@dataclass(frozen=True)
class DetectorSpec:
    """Pointlike comoving two-level detector with a sharp switching window.

    ``t_on``/``t_off`` are comoving times unless ``clock == "conformal"``.
    """

    coupling: float
    t_on: float
    t_off: float
    amp_ground: complex
    amp_excited: complex
    gap: float = 0.0
    clock: str = "comoving"

    def __post_init__(self):
        if not self.coupling >= 0.0:
            raise DomainError(f"coupling must be >= 0, got {self.coupling}")
        if not 0.0 < self.t_on < self.t_off:
            raise DomainError(f"switching needs 0 < t_on < t_off, got [{self.t_on}, {self.t_off}]")
        if self.clock not in ("comoving", "conformal"):
            raise DomainError(f"clock must be 'comoving' or 'conformal', got {self.clock!r}")
        norm = abs(self.amp_excited) ** 2 + abs(self.amp_ground) ** 2
        if abs(norm - 1.0) > NORM_TOL:
            raise DomainError(f"detector state not normalised: |alpha|^2 + |beta|^2 = {norm!r}")

    @classmethod
    def from_state(cls, coupling, t_on, t_off, state: DetectorState, **kw) -> "DetectorSpec":
        return cls(coupling, t_on, t_off, amp_ground=state.amp_ground, amp_excited=state.amp_excited, **kw)

    @property
    def state(self) -> DetectorState:
        return DetectorState(self.amp_excited, self.amp_ground)

    def window(self, params: CosmologyParams) -> ConformalWindow:
        """Switching window in conformal time."""
        if self.clock == "conformal":
            return ConformalWindow(self.t_on, self.t_off)
        return ConformalWindow.from_comoving(self.t_on, self.t_off, params)


@dataclass(frozen=True)
class SignalBreakdown:
    case_label: CausalCase
    s_delta: float
    s_theta: float
    s2: float
    capacity: float
    capacity_delta_only: float


def _check_R(R):
    if not (R > 0.0 and math.isfinite(R)):
        raise DomainError(f"comoving separation R must be positive and finite, got {R}")


def classify_case(wA: ConformalWindow, wB: ConformalWindow, R: float) -> CausalCase:
    """Causal case of B's window relative to A's light-cone crossing.

    Ties go to the non-strict side: ``eta_fB == eta_iA + R`` is case 1 and
    ``eta_iB == eta_fA + R`` is case 5.
    """
    _check_R(R)
    return CausalCase(kernels.classify(wA.eta_i, wA.eta_f, wB.eta_i, wB.eta_f, R))


def z_bounds(wA: ConformalWindow, wB: ConformalWindow, R: float) -> tuple[float, float]:
    """``(z1, z2) = (min(eta_fA + R, eta_fB)/R, max(eta_iA + R, eta_iB)/R)``."""
    _check_R(R)
    return min(wA.eta_f + R, wB.eta_f) / R, max(wA.eta_i + R, wB.eta_i) / R


def _terms(wA, wB, R):
    _check_R(R)
    case, sd, st = kernels.signal_terms_scalar(wA.eta_i, wA.eta_f, wB.eta_i, wB.eta_f, R)
    return CausalCase(case), sd, st


def s_delta(wA: ConformalWindow, wB: ConformalWindow, R: float) -> float:
    """Light-cone term: length of the light-cone contact divided by R."""
    return _terms(wA, wB, R)[1]


def s_theta(wA: ConformalWindow, wB: ConformalWindow, R: float) -> float:
    """Timelike-interior term ``iint dx dy / (x y)`` over ``y - x > R``."""
    return _terms(wA, wB, R)[2]


def state_prefactor(stateA: DetectorState, stateB: DetectorState) -> float:
    """``Re(conj(alpha_A) beta_A) * Im(conj(alpha_B) beta_B)``."""
    a = complex(stateA.amp_excited).conjugate() * complex(stateA.amp_ground)
    b = complex(stateB.amp_excited).conjugate() * complex(stateB.amp_ground)
    return a.real * b.imag


def channel_capacity(s2_value: float, detA: DetectorSpec, detB: DetectorSpec) -> float:
    """Bits per use of the couple / don't-couple channel, to leading order.

    ``C = lambda_A^2 lambda_B^2 (2/ln 2) (S2 / (4 |alpha_B| |beta_B|))^2``
    with ``s2_value`` the coupling-free estimator.
    """
    spread = abs(detB.amp_excited) * abs(detB.amp_ground)
    if spread == 0.0:
        raise DegenerateReceiverError("receiver in an energy eigenstate: no signal at leading order")
    x = s2_value / (4.0 * spread)
    return (detA.coupling * detB.coupling) ** 2 * (2.0 / math.log(2.0)) * x * x


def signal_breakdown(
    wA: ConformalWindow, wB: ConformalWindow, R: float, detA: DetectorSpec, detB: DetectorSpec
) -> SignalBreakdown:
    """S2 and capacities for windows already in conformal time (alpha = 3/2)."""
    case, sd, st = _terms(wA, wB, R)
    pref = state_prefactor(detA.state, detB.state) / math.pi
    s2_full = pref * (sd + st)
    s2_delta = pref * sd
    return SignalBreakdown(
        case_label=case,
        s_delta=sd,
        s_theta=st,
        s2=s2_full,
        capacity=channel_capacity(s2_full, detA, detB),
        capacity_delta_only=channel_capacity(s2_delta, detA, detB),
    )


def s2(detA: DetectorSpec, detB: DetectorSpec, R: float, params: CosmologyParams) -> SignalBreakdown:
    """Closed-form signalling estimator; only the matter universe has one."""
    if not params.is_matter:
        raise UnsupportedCosmologyError(
            f"closed form needs alpha = 3/2, got {params.alpha}; use huygens.oracle.s2_oracle_mode_sum"
        )
    if detA.gap != 0.0 or detB.gap != 0.0:
        raise UnsupportedCosmologyError("closed form needs gapless detectors")
    return signal_breakdown(detA.window(params), detB.window(params), R, detA, detB)


def optimal_detector_states() -> tuple[DetectorState, DetectorState]:
    """States maximising the capacity: equal weights, relative phase pi (A), pi/2 (B)."""
    h = math.sqrt(0.5)
    stateA = DetectorState(cmath.rect(h, math.pi), complex(h, 0.0))
    stateB = DetectorState(cmath.rect(h, 0.5 * math.pi), complex(h, 0.0))
    return stateA, stateB
