"""Spatially flat FRW background sourced by a fluid with constant p/rho = w.

The scale factor is normalised as ``a(eta) = (eta/eta_star)**(alpha + 1/2)``
with the Big Bang at ``eta = t = 0``.  All physical outputs of the package
depend only on conformal times, so ``eta_star`` merely fixes units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = [
    "CosmologyParams",
    "alpha_from_w",
    "w_from_alpha",
    "scale_factor",
    "conformal_from_comoving",
    "comoving_from_conformal",
    "ConformalWindow",
    "MATTER",
    "RADIATION",
]


def alpha_from_w(w: float) -> float:
    """Mode index ``alpha = (3 - 3w)/(6w + 2)`` of the Bessel mode functions."""
    w = float(w)
    if not w > -1.0:
        raise DomainError(f"w = {w} <= -1 has no Big Bang cosmology of this family")
    denom = 6.0 * w + 2.0
    if denom == 0.0:
        raise DomainError("w = -1/3 is the singular point of the w -> alpha map")
    alpha = (3.0 - 3.0 * w) / denom
    if not alpha > -1.5:
        # -1 < w < -1/3 maps to alpha < -3/2 (accelerating, eta < 0 branch)
        raise DomainError(f"w = {w} gives alpha = {alpha} <= -3/2; only w > -1/3 is supported")
    return alpha


def w_from_alpha(alpha: float) -> float:
    """Inverse of :func:`alpha_from_w`."""
    alpha = float(alpha)
    if not alpha > -1.5:
        raise DomainError(f"alpha = {alpha} must exceed -3/2")
    denom = 6.0 * alpha + 3.0
    if denom == 0.0:
        raise DomainError("alpha = -1/2 corresponds to w -> infinity")
    w = (3.0 - 2.0 * alpha) / denom
    if not w > -1.0:
        raise DomainError(f"alpha = {alpha} gives w = {w} <= -1 (phantom fluid)")
    return w


@dataclass(frozen=True)
class CosmologyParams:
    """Background defined by the equation of state.

    Build with :meth:`from_w` or :meth:`from_alpha`; the constructor checks
    that ``w`` and ``alpha`` agree.
    """

    w: float
    alpha: float
    eta_star: float = 1.0

    def __post_init__(self):
        if not (self.eta_star > 0.0 and math.isfinite(self.eta_star)):
            raise DomainError(f"eta_star must be positive, got {self.eta_star}")
        expected = alpha_from_w(self.w)
        if not math.isclose(expected, self.alpha, rel_tol=1e-12, abs_tol=1e-14):
            raise DomainError(
                f"inconsistent background: w = {self.w} implies alpha = {expected}, got {self.alpha}"
            )

    @classmethod
    def from_w(cls, w: float, eta_star: float = 1.0) -> "CosmologyParams":
        return cls(float(w), alpha_from_w(w), float(eta_star))

    @classmethod
    def from_alpha(cls, alpha: float, eta_star: float = 1.0) -> "CosmologyParams":
        return cls(w_from_alpha(alpha), float(alpha), float(eta_star))

    @property
    def is_matter(self) -> bool:
        """True for the cold-matter universe (alpha = 3/2) where closed forms exist."""
        return self.alpha == 1.5


MATTER = CosmologyParams.from_w(0.0)
RADIATION = CosmologyParams.from_w(1.0 / 3.0)


def scale_factor(eta: float, params: CosmologyParams) -> float:
    if not eta > 0.0:
        raise DomainError(f"conformal time must be positive (after the Big Bang), got {eta}")
    return (eta / params.eta_star) ** (params.alpha + 0.5)


def conformal_from_comoving(t: float, params: CosmologyParams) -> float:
    """Conformal time reached at comoving time ``t`` (both measured from the Big Bang).

    Solves ``t = eta_star/(alpha + 3/2) * (eta/eta_star)**(alpha + 3/2)``.
    """
    if not t > 0.0:
        raise DomainError(f"comoving time must be positive, got {t}")
    p = params.alpha + 1.5
    return params.eta_star * (p * t / params.eta_star) ** (1.0 / p)


def comoving_from_conformal(eta: float, params: CosmologyParams) -> float:
    if not eta > 0.0:
        raise DomainError(f"conformal time must be positive, got {eta}")
    p = params.alpha + 1.5
    return params.eta_star / p * (eta / params.eta_star) ** p


@dataclass(frozen=True)
class ConformalWindow:
    """Switching interval [eta_i, eta_f] of a detector in conformal time."""

    eta_i: float
    eta_f: float

    def __post_init__(self):
        if not 0.0 < self.eta_i < self.eta_f:
            raise DomainError(f"conformal window needs 0 < eta_i < eta_f, got [{self.eta_i}, {self.eta_f}]")

    @classmethod
    def from_comoving(cls, t_on: float, t_off: float, params: CosmologyParams) -> "ConformalWindow":
        return cls(conformal_from_comoving(t_on, params), conformal_from_comoving(t_off, params))

    @property
    def length(self) -> float:
        return self.eta_f - self.eta_i

    @property
    def log_ratio(self) -> float:
        return math.log(self.eta_f / self.eta_i)
