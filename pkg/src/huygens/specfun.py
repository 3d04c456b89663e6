"""Special functions and quadrature used by the signalling code.

Bessel functions of real order are delegated to :mod:`scipy.special`; the
dilogarithm comes from the kernel core.  The two integrators are small,
self-contained Gauss-Kronrod based routines with explicit evaluation budgets.
"""

from __future__ import annotations

import bisect
import heapq
import math
from collections import deque
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special

from ._backend import kernels
from .errors import ConvergenceError, DivergenceError, DomainError

__all__ = [
    "QuadResult",
    "bessel_j",
    "bessel_y",
    "bessel_derivative",
    "dilog",
    "adaptive_quad",
    "oscillatory_tail_quad",
    "wynn_epsilon",
    "WRONSKIAN_RTOL",
    "HALF_INTEGER_ATOL",
    "DILOG_ATOL",
    "DILOG_ONE_ATOL",
]

ORDER_MIN = -2.5
ORDER_MAX = 11.0  # alpha + 1 at the largest supported alpha

# Accuracy guaranteed by this module (checked by the test suite).
WRONSKIAN_RTOL = 1e-10  # J Y' - J' Y = 2/(pi x), 0.1 <= x <= 100
HALF_INTEGER_ATOL = 1e-12  # half-integer orders vs elementary forms, in units of sqrt(2/(pi x))
DILOG_ATOL = 1e-12  # reflection identity on (0, 1)
DILOG_ONE_ATOL = 1e-15  # Li2(1) = pi^2/6


@dataclass(frozen=True)
class QuadResult:
    value: float
    error_estimate: float
    evaluations: int

    def __float__(self):
        return self.value


def _check_bessel_args(order, x):
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0.0)):
        raise DomainError("Bessel argument must be positive")
    if not ORDER_MIN <= order <= ORDER_MAX:
        raise DomainError(f"order {order} outside supported range [{ORDER_MIN}, {ORDER_MAX}]")
    return x


def _snap_order(order):
    # scipy's yv loses the reflection term for orders within ~1e-300 of an integer
    n = round(order)
    return float(n) if abs(order - n) < 1e-15 else order


def bessel_j(order: float, x):
    """J_order(x) for x > 0 (scalar or array)."""
    x = _check_bessel_args(order, x)
    out = special.jv(order, x)
    return float(out) if out.ndim == 0 else out


def bessel_y(order: float, x):
    """Y_order(x) for x > 0 (scalar or array)."""
    x = _check_bessel_args(order, x)
    out = special.yv(_snap_order(order), x)
    return float(out) if out.ndim == 0 else out


def bessel_derivative(fn, order, x):
    """d/dx of ``fn`` in {bessel_j, bessel_y} via 2 f' = f_{v-1} - f_{v+1}."""
    return 0.5 * (fn(order - 1.0, x) - fn(order + 1.0, x))


def dilog(x: float) -> float:
    """Real dilogarithm Li2(x) = -int_0^x ln(1-u)/u du for x <= 1."""
    x = float(x)
    if not x <= 1.0:
        raise DomainError(f"dilog({x}): arguments above 1 lie on the branch cut")
    return kernels.dilog(x)


# -- Gauss-Kronrod 7/15 ------------------------------------------------------

_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
# symmetric layout: -x0..-x6, 0, x6..x0
_NODES = np.concatenate([-_XGK[:-1], [0.0], _XGK[-2::-1]])
_WK = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[-2::-1]])
_WG15 = np.zeros(15)
_WG15[[1, 3, 5]] = _WG[:3]
_WG15[7] = _WG[3]
_WG15[[9, 11, 13]] = _WG[2::-1]
_EPS = np.finfo(float).eps


def _gk15(f, a, b, vectorized):
    half = 0.5 * (b - a)
    center = 0.5 * (a + b)
    x = center + half * _NODES
    fx = np.asarray(f(x), dtype=float) if vectorized else np.array([f(xi) for xi in x], dtype=float)
    if fx.shape != (15,):
        raise ValueError("vectorized integrand must return one value per node")
    kron = half * float(_WK @ fx)
    gauss = half * float(_WG15 @ fx)
    # QUADPACK error heuristic (qk15)
    resabs = abs(half) * float(_WK @ np.abs(fx))
    mean = kron / (2.0 * half) if half else 0.0
    resasc = abs(half) * float(_WK @ np.abs(fx - mean))
    err = abs(kron - gauss)
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    if resabs > np.finfo(float).tiny / (50.0 * _EPS):
        err = max(50.0 * _EPS * resabs, err)
    if not np.all(np.isfinite(fx)):
        err = math.inf
    return kron, err


def adaptive_quad(
    f: Callable,
    a: float,
    b: float,
    tol: float = 1e-10,
    *,
    max_eval: int = 200_000,
    vectorized: bool = False,
) -> QuadResult:
    """Globally adaptive Gauss-Kronrod (7/15) quadrature of ``f`` over [a, b].

    Stops once the summed error estimate is below ``tol * max(1, |value|)``.
    With ``vectorized=True`` the integrand receives the 15 nodes of a panel as
    one array.  Raises :class:`ConvergenceError` (carrying the best estimate)
    when ``max_eval`` integrand evaluations are not enough.
    """
    a = float(a)
    b = float(b)
    if not a < b:
        raise DomainError(f"integration limits must satisfy a < b, got [{a}, {b}]")
    if not tol > 0.0:
        raise DomainError("tol must be positive")
    value, err = _gk15(f, a, b, vectorized)
    evals = 15
    heap = [(-err, a, b, value, err)]
    total, total_err = value, err
    while total_err > tol * max(1.0, abs(total)):
        if evals + 30 > max_eval:
            raise ConvergenceError(
                f"adaptive_quad on [{a}, {b}] did not reach tol={tol} in {max_eval} evaluations",
                estimate=total,
                error_estimate=total_err,
            )
        _, lo, hi, v, e = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            # interval cannot be split further in floating point
            raise ConvergenceError(
                f"adaptive_quad: unresolvable feature near {mid}", estimate=total, error_estimate=total_err
            )
        v1, e1 = _gk15(f, lo, mid, vectorized)
        v2, e2 = _gk15(f, mid, hi, vectorized)
        evals += 30
        heapq.heappush(heap, (-e1, lo, mid, v1, e1))
        heapq.heappush(heap, (-e2, mid, hi, v2, e2))
        # re-summing avoids drift from incremental updates
        total = math.fsum(item[3] for item in heap)
        total_err = math.fsum(item[4] for item in heap)
    return QuadResult(float(total), float(total_err), evals)


def wynn_epsilon(seq):
    """Wynn epsilon extrapolation of a sequence of partial sums.

    Returns ``(estimate, error)`` from the highest even column reached along
    the last diagonal; the error compares it with the previous diagonal.
    """
    s = [float(v) for v in seq]
    n = len(s)
    if n < 3:
        return s[-1], math.inf if n < 2 else abs(s[-1] - s[-2])
    prev = [0.0] * (n + 1)
    cur = s[:]
    columns = [cur]
    for _ in range(n - 1):
        nxt = []
        for j in range(len(cur) - 1):
            diff = cur[j + 1] - cur[j]
            if diff == 0.0:
                nxt = []
                break
            nxt.append(prev[j + 1] + 1.0 / diff)
        if not nxt:
            break
        prev, cur = cur, nxt
        columns.append(cur)
    even = [col for i, col in enumerate(columns) if i % 2 == 0]
    best = even[-1]
    estimate = best[-1]
    if len(best) >= 2:
        error = abs(best[-1] - best[-2])
    elif len(even) >= 2:
        error = abs(estimate - even[-2][-1])
    else:
        error = math.inf
    return estimate, error


def oscillatory_tail_quad(
    envelope: Callable,
    phase_rate: float,
    a: float,
    tol: float = 1e-10,
    *,
    phase: float = 0.0,
    vectorized: bool = False,
    min_panels: int = 8,
    max_panels: int = 4000,
    window: int = 30,
    decay_power: float | None = None,
) -> QuadResult:
    """Integral of ``envelope(k) * sin(phase_rate*k + phase)`` over [a, inf).

    The range is cut at the zeros of the sine; each half-period is integrated
    with :func:`adaptive_quad` and the partial sums are extrapolated with the
    Wynn epsilon algorithm.  An envelope that does not decay is reported as a
    :class:`DivergenceError` rather than silently Abel-summed.

    Wynn extrapolation assumes a smooth envelope.  When the envelope itself
    oscillates (several frequencies), pass ``decay_power=p`` if it is known
    to fall off like ``k**-p`` with p > 1: the partial sums are then used
    as they are, and summation stops once the bound
    ``max(k**p |envelope|) * K**(1-p) / (p-1)`` on the remaining tail,
    with the maximum sampled over [K/2, K], is below tol.
    """
    if not phase_rate > 0.0:
        raise DomainError("phase_rate must be positive")
    if not tol > 0.0:
        raise DomainError("tol must be positive")
    a = float(a)
    period = math.pi / phase_rate
    first = math.floor((phase_rate * a + phase) / math.pi) + 1
    edges_at = lambda n: (n * math.pi - phase) / phase_rate  # noqa: E731

    if vectorized:
        integrand = lambda k: envelope(k) * np.sin(phase_rate * k + phase)  # noqa: E731
    else:
        integrand = lambda k: envelope(k) * math.sin(phase_rate * k + phase)  # noqa: E731

    if decay_power is not None:
        if not decay_power > 1.0:
            raise DomainError("decay_power must exceed 1")
        return _algebraic_tail(envelope, integrand, phase_rate, phase, a, tol, vectorized,
                               min_panels, max_panels, float(decay_power))

    panel_tol = tol / 10.0
    lo = a
    n = first
    terms = []
    partial = []
    evals = 0
    quad_err = 0.0
    history = []
    running = 0.0
    while len(terms) < max_panels:
        hi = edges_at(n)
        if hi <= lo:
            hi = lo + period
        try:
            res = adaptive_quad(integrand, lo, hi, panel_tol, vectorized=vectorized)
        except ConvergenceError as exc:
            raise ConvergenceError(
                f"oscillatory_tail_quad: panel {len(terms)} [{lo}, {hi}] failed: {exc}",
                estimate=running,
            ) from exc
        evals += res.evaluations
        quad_err += res.error_estimate
        terms.append(res.value)
        running += res.value
        partial.append(running)
        lo = hi
        n += 1

        count = len(terms)
        if count % 20 == 0 and count >= 40:
            late = np.mean(np.abs(terms[-10:]))
            early = np.mean(np.abs(terms[-20:-10]))
            if late >= 0.9 * early and late > panel_tol:
                raise DivergenceError(
                    f"oscillatory_tail_quad: half-period integrals stopped decaying after {count} panels",
                    estimate=running,
                )
        if count < min_panels:
            continue
        head = np.mean(np.abs(terms[:4]))
        tail = np.mean(np.abs(terms[-4:]))
        if head > 0.0 and tail > 0.75 * head:
            continue
        est, err = wynn_epsilon(partial[-window:])
        history.append(est)
        if len(history) >= 3:
            spread = max(abs(history[-1] - history[-2]), abs(history[-1] - history[-3]))
            total_err = max(spread, err if math.isfinite(err) else spread) + quad_err
            if spread + quad_err <= tol * max(1.0, abs(est)) or max(np.abs(terms[-3:])) <= panel_tol * 1e-3:
                return QuadResult(float(est), float(total_err), evals)
    raise ConvergenceError(
        f"oscillatory_tail_quad: no convergence within {max_panels} panels", estimate=running
    )


def _algebraic_tail(envelope, integrand, phase_rate, phase, a, tol, vectorized,
                    min_panels, max_panels, p):
    period = math.pi / phase_rate
    n = math.floor((phase_rate * a + phase) / math.pi) + 1
    lo = a
    running = quad_err = 0.0
    evals = 0
    last = 0.0  # |previous panel|
    # sliding maximum of k**p |envelope| over panels ending in [K/2, K]
    peaks = deque()  # (panel end, value), values decreasing
    history = []  # (K, bound)
    count = 0
    while count < max_panels:
        hi = (n * math.pi - phase) / phase_rate
        if hi <= lo:
            hi = lo + period
        # summable schedule (adds up to tol/2), floored above roundoff in the
        # GK error estimate, which scales with the panel's magnitude
        panel_tol = max(3.0 * tol / (math.pi * (count + 1)) ** 2, 1e-13 * last)
        try:
            res = adaptive_quad(integrand, lo, hi, panel_tol, vectorized=vectorized)
        except ConvergenceError as exc:
            raise ConvergenceError(
                f"oscillatory_tail_quad: panel {count} [{lo}, {hi}] failed: {exc}",
                estimate=running,
            ) from exc
        evals += res.evaluations
        quad_err += res.error_estimate
        running += res.value
        last = abs(res.value)
        ks = lo + (hi - lo) * np.array([0.125, 0.375, 0.625, 0.875])
        env = envelope(ks) if vectorized else np.array([envelope(float(k)) for k in ks])
        evals += len(ks)
        peak = float(np.max(np.abs(env) * ks**p))
        while peaks and peaks[-1][1] <= peak:
            peaks.pop()
        peaks.append((hi, peak))
        while peaks[0][0] < 0.5 * hi:
            peaks.popleft()
        lo = hi
        n += 1
        count += 1

        bound = peaks[0][1] * hi ** (1.0 - p) / (p - 1.0)
        history.append((hi, bound))
        if hi >= 4.0 * max(a, period):
            j = bisect.bisect_right(history, (0.5 * hi, math.inf)) - 1
            if bound >= history[j][1] and bound > 1e-3 * tol:
                raise DivergenceError(
                    f"oscillatory_tail_quad: envelope decays slower than k**-{p:g} "
                    f"(tail bound did not shrink from k = {history[j][0]:.6g} to {hi:.6g})",
                    estimate=running,
                )
        if count >= min_panels and bound + quad_err <= tol * max(1.0, abs(running)):
            return QuadResult(float(running), float(bound + quad_err), evals)
    raise ConvergenceError(
        f"oscillatory_tail_quad: no convergence within {max_panels} panels", estimate=running
    )
