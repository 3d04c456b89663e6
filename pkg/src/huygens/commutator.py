"""Field commutator of a minimally coupled massless scalar in flat FRW.

Sign conventions
----------------
Everything here is the coefficient of the imaginary unit in
``[phi(x), phi(x')]`` with ``x`` the first and ``x'`` the second event and
``delta_eta = eta - eta'``.  The general-alpha commutator is taken as

    [phi(x), phi(x')] = -i / (pi^2 a a' R) * int_0^inf dk sin(kR) g_alpha(eta, eta', k),

which reproduces both the light-cone delta terms and the interior theta term
of the alpha = 3/2 closed form, and is antisymmetric under x <-> x' because
``g_alpha`` is.

:func:`window_integrated_commutator` integrates over the *retarded* pairs
(receiver window later than the sender event), which is the part that
enters the signalling estimator.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .cosmo import ConformalWindow, CosmologyParams, scale_factor
from .errors import ConvergenceError, DomainError, UnsupportedCosmologyError
from .specfun import QuadResult, adaptive_quad, bessel_j, bessel_y, oscillatory_tail_quad

__all__ = [
    "CommutatorValue",
    "ALPHA_MIN",
    "ALPHA_MAX",
    "mode_kernel_g",
    "wronskian_denominator",
    "commutator_matter",
    "window_integrated_commutator",
]

log = logging.getLogger("huygens")

# supported mode-index range for the mode-sum route
ALPHA_MIN = -1.5 + 0.01
ALPHA_MAX = 10.0
# decay exponent of the window remainder: the O(k^-3) pointwise term is odd
# in eta_B - eta_A, so window integration gains two powers
REMAINDER_DECAY = 5.0


@dataclass(frozen=True)
class CommutatorValue:
    """Pointwise commutator split into light-cone and interior pieces.

    ``delta_retarded_strength`` multiplies delta(delta_eta - R) and
    ``delta_advanced_strength`` multiplies delta(delta_eta + R); each is
    reported only when the pair sits on that branch of the light cone and is
    zero otherwise.  ``interior_value`` is the theta-term, nonzero only for
    timelike pairs.
    """

    delta_retarded_strength: float
    delta_advanced_strength: float
    interior_value: float

    def swapped(self) -> "CommutatorValue":
        """Value for the exchanged pair of events (antisymmetry)."""
        return CommutatorValue(-self.delta_advanced_strength, -self.delta_retarded_strength, -self.interior_value)


def wronskian_denominator(alpha: float, eta_p: float, k: float) -> float:
    """Y(k eta') L^J(k eta') - J(k eta') L^Y(k eta'); analytically -4/(pi k eta')."""
    x = k * eta_p
    lj = bessel_j(alpha - 1.0, x) - bessel_j(alpha + 1.0, x)
    ly = bessel_y(alpha - 1.0, x) - bessel_y(alpha + 1.0, x)
    return bessel_y(alpha, x) * lj - bessel_j(alpha, x) * ly


def mode_kernel_g(alpha: float, eta: float, eta_p: float, k: float) -> float:
    """Mode kernel g_alpha(eta, eta', k), evaluated term by term from Bessel functions."""
    if not (eta > 0 and eta_p > 0 and k > 0):
        raise DomainError("mode_kernel_g needs eta, eta', k > 0")
    x, xp = k * eta, k * eta_p
    j, y = bessel_j(alpha, x), bessel_y(alpha, x)
    jp, yp = bessel_j(alpha, xp), bessel_y(alpha, xp)
    lj = bessel_j(alpha - 1.0, xp) - bessel_j(alpha + 1.0, xp)
    ly = bessel_y(alpha - 1.0, xp) - bessel_y(alpha + 1.0, xp)
    g_jy = j * yp / (yp * lj - jp * ly)
    g_yj = y * jp / (jp * ly - yp * lj)
    return math.sqrt(eta / eta_p) * (g_jy + g_yj)


def _on_branch(value: float, scale: float) -> bool:
    return abs(value) <= 1e-12 * scale


def commutator_matter(eta: float, eta_p: float, R: float, params: CosmologyParams) -> CommutatorValue:
    """Closed-form commutator in the matter-dominated universe (alpha = 3/2)."""
    if not params.is_matter:
        raise UnsupportedCosmologyError(
            f"closed-form commutator only exists for alpha = 3/2, got alpha = {params.alpha}"
        )
    if not R > 0:
        raise DomainError("comoving separation R must be positive")
    aa = scale_factor(eta, params) * scale_factor(eta_p, params)
    d = eta - eta_p
    scale = max(eta, eta_p, R)
    light = 1.0 / (4.0 * math.pi * aa * R)
    retarded = -light if _on_branch(d - R, scale) else 0.0
    advanced = light if _on_branch(d + R, scale) else 0.0
    interior = 0.0
    if abs(d) > R and not (_on_branch(d - R, scale) or _on_branch(d + R, scale)):
        interior = -math.copysign(1.0, d) / (4.0 * math.pi * aa * eta * eta_p)
    return CommutatorValue(retarded, advanced, interior)


def _validate_alpha(alpha):
    if not ALPHA_MIN < alpha <= ALPHA_MAX:
        raise DomainError(f"mode-sum supports alpha in ({ALPHA_MIN}, {ALPHA_MAX}], got {alpha}")


def light_cone_length(wa: ConformalWindow, wb: ConformalWindow, R: float) -> float:
    """Length of sender times eta_A whose future light cone at distance R hits B's window."""
    return max(0.0, min(wa.eta_f, wb.eta_f - R) - max(wa.eta_i, wb.eta_i - R))


def _asymptotic_interior(alpha, wa, wb, R, tol):
    # Pointwise k-integral of the O(1/k) and O(1/k^2) asymptotic terms of the
    # mode kernel, integrated over the retarded window pairs.  With d = y - x,
    #   int_0^inf sin(kR) cos(kd)/k dk   = (pi/2) theta(R - d)
    #   int_0^inf sin(kR) sin(kd)/k^2 dk = (pi/2) min(R, d)
    # and the y-integral is done in closed form.
    h1, h2 = kernels.hankel_coefficients(alpha)
    if h1 == 0.0 and h2 == 0.0:
        return QuadResult(0.0, 0.0, 0)
    b1, b2 = wb.eta_i, wb.eta_f

    def inner(x):
        lo = max(b1, x)
        if lo >= b2:
            return 0.0
        total = 0.0
        mid = min(b2, x + R)
        if mid > lo:
            # d < R: both terms, m(y) = y - x
            lg = math.log(mid / lo)
            by_y = (mid - lo) - x * lg
            total += (0.5 * h1 * h1 - 0.5 * h1) * by_y / x
            total -= 0.5 * h2 * (0.5 * (mid * mid - lo * lo) - x * (mid - lo)) / (x * x)
            total -= 0.5 * h2 * (lg + x * (1.0 / mid - 1.0 / lo))
        far = max(lo, x + R)
        if b2 > far:
            # d > R: only the 1/k^2 term, m(y) = R
            total += 0.5 * R * (h1 * h1 * math.log(b2 / far) / x
                                - h2 * (b2 - far) / (x * x)
                                - h2 * (1.0 / far - 1.0 / b2))
        return total

    cuts = sorted({wa.eta_i, wa.eta_f} | {p for p in (b1, b2, b1 - R, b2 - R) if wa.eta_i < p < wa.eta_f})
    value = err = 0.0
    evals = 0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        res = adaptive_quad(inner, lo, hi, tol)
        value += res.value
        err += res.error_estimate
        evals += res.evaluations
    return QuadResult(0.5 * math.pi * value, 0.5 * math.pi * err, evals)


def window_integrated_commutator(
    alpha: float,
    window_a: ConformalWindow,
    window_b: ConformalWindow,
    R: float,
    tol: float = 1e-10,
    *,
    full_output: bool = False,
):
    """Imaginary part of the window-integrated retarded commutator.

    Computes ``Im iint a(eta_A) a(eta_B) [phi(A), phi(B)] d eta_A d eta_B``
    over pairs with ``eta_B > eta_A``, from the Bessel mode sum.  For
    alpha = 3/2 this equals ``(S_delta + S_theta)/(4 pi)``.

    The mode sum is split as light-cone part (exact) + the pointwise
    k-integrated 1/k and 1/k^2 asymptotic terms (1D quadrature) + a
    remainder whose window integral decays like k**-5; the remainder's
    k-integral runs over [0, k_c] with :func:`adaptive_quad` and over
    [k_c, inf) with :func:`oscillatory_tail_quad` in its algebraic-decay
    mode.  For alpha = 1/2 and 3/2 the remainder vanishes identically.

    Below alpha = 1/2 there is no closed form to check the mode
    normalisation against, so such results are logged as unvalidated.

    Accuracy degrades for large alpha combined with windows spanning many
    decades in eta, where J_alpha and Y_alpha differ by many orders of
    magnitude and the window forms cancel.
    """
    _validate_alpha(alpha)
    if not R > 0:
        raise DomainError("comoving separation R must be positive")
    if not tol > 0:
        raise DomainError("tol must be positive")
    if alpha < 0.5:
        log.warning("alpha = %g < 1/2: mode-sum normalisation not validated against a closed form", alpha)
    a1, a2, b1, b2 = window_a.eta_i, window_a.eta_f, window_b.eta_i, window_b.eta_f
    norm = math.pi**2 * R
    sub_tol = tol * norm / 4.0

    light = 0.25 * math.pi * light_cone_length(window_a, window_b, R)
    first = _asymptotic_interior(alpha, window_a, window_b, R, sub_tol)

    def remainder(ks):
        return kernels.window_remainder(alpha, ks, a1, a2, b1, b2)

    def integrand(ks):
        return np.sin(ks * R) * remainder(ks)

    k_c = max(2.0 * math.pi / R, 2.0 * math.pi / b2)
    try:
        head = adaptive_quad(integrand, 0.0, k_c, sub_tol, vectorized=True)
    except ConvergenceError as exc:
        raise ConvergenceError(f"mode sum: k-panel [0, {k_c}] failed: {exc}", exc.estimate) from exc
    # mixed absolute/relative target: |error in value| <= tol * max(1, |value|)
    tail_tol = tol * max(norm, abs(light + first.value + head.value)) / 4.0
    tail = oscillatory_tail_quad(remainder, R, k_c, tail_tol, vectorized=True, decay_power=REMAINDER_DECAY)

    value = (light + first.value + head.value + tail.value) / norm
    if not full_output:
        return value
    error = (first.error_estimate + head.error_estimate + tail.error_estimate) / norm
    evals = first.evaluations + head.evaluations + tail.evaluations
    return QuadResult(value, error, evals)
