"""Brute-force reference values of the signalling estimator S2.

Two routes, independent of the closed form in :mod:`huygens.signalling`:

* ``s2_oracle_matter`` integrates the alpha = 3/2 commutator over the two
  switching windows directly: the light-cone part along ``y = x + R`` and
  the interior ``1/(x y)`` by iterated adaptive quadrature over the exact
  polygon ``{x in A, y in B, y - x > R}``.
* ``s2_oracle_mode_sum`` goes through the Bessel mode sum and works for any
  supported alpha.

Also hosts the seeded random-geometry generator used by the verification
suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from .commutator import ALPHA_MAX, ALPHA_MIN, light_cone_length, window_integrated_commutator
from .cosmo import ConformalWindow, CosmologyParams
from .errors import ConvergenceError, DomainError, UnsupportedCosmologyError
from .signalling import CausalCase, DetectorSpec, classify_case, state_prefactor
from .specfun import adaptive_quad

__all__ = [
    "OracleReport",
    "Geometry",
    "s2_oracle_matter",
    "s2_oracle_mode_sum",
    "theta_region_integral",
    "random_geometry",
    "random_geometries",
]

METHOD_MATTER = "closed-form-commutator-quad"
METHOD_MODE_SUM = "mode-sum"

ETA_RANGE = (0.1, 100.0)
R_RANGE = (0.01, 50.0)


@dataclass(frozen=True)
class OracleReport:
    s_delta_numeric: float
    s_theta_numeric: float
    s2_numeric: float
    quadrature_error: float
    method: str

    def __post_init__(self):
        if not self.quadrature_error >= 0.0:
            raise DomainError(f"quadrature_error must be >= 0, got {self.quadrature_error}")


class Geometry(NamedTuple):
    window_a: ConformalWindow
    window_b: ConformalWindow
    R: float
    case: CausalCase


def theta_region_integral(wA: ConformalWindow, wB: ConformalWindow, R: float, tol: float = 1e-12):
    """``iint dx dy / (x y)`` over ``x in A, y in B, y - x > R``; returns (value, error).

    Both integrations are numerical; the outer one is split where the inner
    limits change form (``x = eta_iB - R`` and ``x = eta_fB - R``).
    """
    a1, a2, b1, b2 = wA.eta_i, wA.eta_f, wB.eta_i, wB.eta_f
    hi_x = min(a2, b2 - R)
    if hi_x <= a1:
        return 0.0, 0.0
    inner_err = [0.0]

    def inner(x):
        lo = max(b1, x + R)
        if lo >= b2:
            return 0.0
        res = adaptive_quad(lambda y: 1.0 / y, lo, b2, tol)
        inner_err[0] = max(inner_err[0], res.error_estimate)
        return res.value / x

    cuts = sorted({a1, hi_x} | {p for p in (b1 - R,) if a1 < p < hi_x})
    value = err = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        try:
            res = adaptive_quad(inner, lo, hi, tol)
        except ConvergenceError as exc:
            raise ConvergenceError(
                f"theta-term quadrature failed on x in [{lo}, {hi}] (y in [max({b1}, x + {R}), {b2}]): {exc}",
                estimate=exc.estimate,
            ) from exc
        value += res.value
        # inner errors are weighted by 1/x over the sub-interval
        err += res.error_estimate + inner_err[0] * math.log(hi / lo)
    return value, err


def s2_oracle_matter(
    detA: DetectorSpec, detB: DetectorSpec, R: float, params: CosmologyParams, tol: float = 1e-12
) -> OracleReport:
    """S2 by direct window integration of the matter-era commutator."""
    if not params.is_matter:
        raise UnsupportedCosmologyError(f"matter oracle needs alpha = 3/2, got {params.alpha}")
    if not tol > 0.0:
        raise DomainError("tol must be positive")
    if not R > 0.0:
        raise DomainError("comoving separation R must be positive")
    wA, wB = detA.window(params), detB.window(params)
    sd = light_cone_length(wA, wB, R) / R
    st, err = theta_region_integral(wA, wB, R, tol)
    pref = state_prefactor(detA.state, detB.state) / math.pi
    return OracleReport(sd, st, pref * (sd + st), abs(pref) * err, METHOD_MATTER)


def s2_oracle_mode_sum(
    detA: DetectorSpec, detB: DetectorSpec, R: float, alpha: float, tol: float = 1e-8
) -> OracleReport:
    """S2 from the Bessel mode sum for any alpha in (-3/2 + 0.01, 10].

    ``s_delta_numeric`` is the light-cone share; ``s_theta_numeric`` is the
    rest, i.e. the timelike-interior (Huygens-violating) part.  Comoving
    detector times are converted in the background with this alpha; for
    -3/2 < alpha <= -1/2 no fluid exists, so detectors must use the
    conformal clock.
    """
    if not ALPHA_MIN < alpha <= ALPHA_MAX:
        raise DomainError(f"mode-sum oracle supports alpha in ({ALPHA_MIN}, {ALPHA_MAX}], got {alpha}")
    conformal = detA.clock == detB.clock == "conformal"
    params = None if conformal else CosmologyParams.from_alpha(alpha)
    wA, wB = detA.window(params), detB.window(params)
    res = window_integrated_commutator(alpha, wA, wB, R, tol, full_output=True)
    total = 4.0 * math.pi * res.value  # S_delta + S_theta
    sd = light_cone_length(wA, wB, R) / R
    pref = state_prefactor(detA.state, detB.state) / math.pi
    return OracleReport(
        sd,
        total - sd,
        pref * total,
        abs(pref) * 4.0 * math.pi * res.error_estimate,
        METHOD_MODE_SUM,
    )


def _log_uniform(rng, lo, hi, size=None):
    return np.exp(rng.uniform(math.log(lo), math.log(hi), size))


def random_geometry(rng: np.random.Generator, case: int | None = None, max_tries: int = 100000) -> Geometry:
    """Draw windows (log-uniform eta in [0.1, 100]) and R (log-uniform in [0.01, 50]).

    With ``case`` given, draws are rejected until the geometry falls in it.
    """
    for _ in range(max_tries):
        a = np.sort(_log_uniform(rng, *ETA_RANGE, 2))
        b = np.sort(_log_uniform(rng, *ETA_RANGE, 2))
        R = float(_log_uniform(rng, *R_RANGE))
        if not (a[0] < a[1] and b[0] < b[1]):
            continue
        wA = ConformalWindow(float(a[0]), float(a[1]))
        wB = ConformalWindow(float(b[0]), float(b[1]))
        label = classify_case(wA, wB, R)
        if case is None or label == case:
            return Geometry(wA, wB, R, label)
    raise RuntimeError(f"no case-{case} geometry in {max_tries} draws")


def random_geometries(seed: int, per_case: int, cases=tuple(CausalCase)) -> Iterator[Geometry]:
    """``per_case`` geometries for each case in ``cases``, reproducible from ``seed``."""
    if per_case < 1:
        raise DomainError(f"per_case must be >= 1, got {per_case}")
    rng = np.random.default_rng(seed)
    for case in cases:
        for _ in range(per_case):
            yield random_geometry(rng, int(case))
