"""Pure-Python/numpy implementations of the hot kernels.

Mirrors ``_kernels.pyx`` function for function; selected automatically when
the compiled extension is missing or ``HUYGENS_PURE_PYTHON`` is set.
"""

import math

import numpy as np
from scipy.special import jv, yv

from ._quadrules import (
    DILOG_BERNOULLI,
    GL_CUMULATIVE,
    GL_NODES,
    GL_WEIGHTS,
    RECT_PHASE_STEP,
    TRI_PHASE_STEP,
)

PI2_6 = math.pi**2 / 6.0


def _dilog_core(x):
    # |x| <= 1/2
    u = -math.log1p(-x)
    u2 = u * u
    total = DILOG_BERNOULLI[0] * u + DILOG_BERNOULLI[1] * u2
    power = u
    for c in DILOG_BERNOULLI[2:]:
        power *= u2
        total += c * power
    return total


def dilog(x):
    """Real dilogarithm Li2(x) for x <= 1."""
    x = float(x)
    if x > 1.0 or x != x:
        raise ValueError(f"dilog argument {x} > 1 is on the branch cut")
    if x == 1.0:
        return PI2_6
    if x < -1.0:
        lg = math.log(-x)
        return -PI2_6 - 0.5 * lg * lg - dilog(1.0 / x)
    if x < -0.5:
        lg = math.log1p(-x)
        return -_dilog_core(x / (x - 1.0)) - 0.5 * lg * lg
    if x <= 0.5:
        return _dilog_core(x)
    return PI2_6 - math.log(x) * math.log1p(-x) - _dilog_core(1.0 - x)


def dilog_array(x):
    x = np.asarray(x, dtype=float)
    return np.vectorize(dilog, otypes=[float])(x)


def classify(a1, a2, b1, b2, R):
    u = a1 + R
    v = a2 + R
    if b2 <= u:
        return 1
    if b1 >= v:
        return 5
    if b1 < u:
        return 2 if b2 <= v else 6
    return 3 if b2 <= v else 4


def signal_terms_scalar(a1, a2, b1, b2, R):
    """(case, S_delta, S_theta) for conformal windows [a1,a2] (A) and [b1,b2] (B)."""
    case = classify(a1, a2, b1, b2, R)
    if case == 1:
        return 1, 0.0, 0.0
    if case == 5:
        return 5, 0.0, math.log(a2 / a1) * math.log(b2 / b1)
    top = min(a2 + R, b2)  # R*z1
    bottom = max(a1 + R, b1)  # R*z2
    s_delta = (top - bottom) / R
    # R*(z - 1) evaluated without forming z
    x1 = min(a2, b2 - R)
    x2 = max(a1, b1 - R)
    lx1 = math.log(x1 / a1)
    lx2 = math.log(x2 / a1)
    L1 = lx1 * math.log(top / R) + dilog(-x1 / R)
    L2 = lx2 * math.log(bottom / R) + dilog(-x2 / R)
    N1 = lx1 * math.log(b2 / top)
    return case, s_delta, L1 - L2 + N1


def signal_terms(a1, a2, b1, b2, R):
    a1, a2, b1, b2, R = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (a1, a2, b1, b2, R)))
    shape = a1.shape
    cases = np.empty(shape, dtype=np.int64)
    sd = np.empty(shape)
    st = np.empty(shape)
    for idx in np.ndindex(shape):
        cases[idx], sd[idx], st[idx] = signal_terms_scalar(a1[idx], a2[idx], b1[idx], b2[idx], R[idx])
    return cases, sd, st


# -- window-integrated mode kernel -------------------------------------------

def _mesh(p, q, hmax):
    """Panel edges on [p, q]: geometric near p (ratio 2), then width <= hmax."""
    edges = [p]
    x = p
    while x < q and x < hmax:
        x = min(2.0 * x, q)
        edges.append(x)
    if x < q:
        m = int(math.ceil((q - x) / hmax))
        edges.extend(np.linspace(x, q, m + 1)[1:].tolist())
    e = np.asarray(edges)
    half = 0.5 * (e[1:] - e[:-1])
    mid = 0.5 * (e[1:] + e[:-1])
    nodes = half[:, None] * GL_NODES[None, :] + mid[:, None]
    return nodes, half[:, None]


def _basis(x, k, alpha):
    # rows: J, Y (Hankel-normalised), S, C, S/x, C/x, S/x^2, C/x^2
    kx = k * x
    s = np.sqrt(0.5 * np.pi * kx)
    sn = np.sin(kx)
    cs = np.cos(kx)
    inv = 1.0 / x
    return np.stack([s * jv(alpha, kx), s * yv(alpha, kx), sn, cs, sn * inv, cs * inv, sn * inv * inv, cs * inv * inv])


# (f, h) index pairs of the bilinear forms B(f, h) = iint f(eta_B) h(eta_A)
_J, _Y, _S, _C, _SI, _CI, _SI2, _CI2 = range(8)
_PAIRS = [
    (_Y, _J), (_J, _Y),                          # Bessel kernel
    (_S, _C), (_C, _S),                          # light-cone term
    (_CI, _C), (_SI, _S), (_C, _CI), (_S, _SI),  # 1/k term
    (_SI, _CI), (_CI, _SI),                      # 1/k^2 term, 1/(x y) part
    (_S, _CI2), (_C, _SI2), (_SI2, _C), (_CI2, _S),  # 1/k^2 term, 1/x^2 + 1/y^2 part
]
_PAIRS_F = np.array([f for f, _ in _PAIRS])
_PAIRS_H = np.array([h for _, h in _PAIRS])


def _rect_moments(p, q, k, alpha):
    x, half = _mesh(p, q, RECT_PHASE_STEP / k)
    vals = _basis(x, k, alpha)
    return (vals * (GL_WEIGHTS[None, None, :] * half[None])).sum(axis=(1, 2))


def _triangle_forms(p, q, k, alpha):
    x, half = _mesh(p, q, TRI_PHASE_STEP / k)
    vals = _basis(x, k, alpha)  # (8, panels, 16)
    weighted = vals * (GL_WEIGHTS[None, None, :] * half[None])
    panel_sums = weighted.sum(axis=2)
    prefix = np.cumsum(panel_sums, axis=1) - panel_sums
    partial = np.einsum("im,fpm->fpi", GL_CUMULATIVE, vals) * half[None]
    H = prefix[:, :, None] + partial
    return np.einsum("fpi,fpi->f", weighted[_PAIRS_F], H[_PAIRS_H])


def _window_forms(k, alpha, a1, a2, b1, b2):
    forms = np.zeros(len(_PAIRS_F))
    lo = max(b1, a2)
    rects = []
    if lo < b2:
        rects.append((a1, a2, lo, b2))
    o1 = max(a1, b1)
    o2 = min(a2, b2)
    if o1 < o2:
        if a1 < o1:
            rects.append((a1, o1, o1, o2))
        forms += _triangle_forms(o1, o2, k, alpha)
    for xp, xq, yp, yq in rects:
        mx = _rect_moments(xp, xq, k, alpha)
        my = _rect_moments(yp, yq, k, alpha)
        forms += my[_PAIRS_F] * mx[_PAIRS_H]
    return forms


def hankel_coefficients(alpha):
    """First two large-argument coefficients a1, a2 of J/Y for order alpha."""
    mu = 4.0 * alpha * alpha
    return (mu - 1.0) / 8.0, (mu - 1.0) * (mu - 9.0) / 128.0


def window_remainder(alpha, ks, a1, a2, b1, b2):
    """Window-integrated mode kernel minus its asymptotic expansion to O(k^-2).

    For each k returns iint_D r(eta_B, eta_A, k) d eta_A d eta_B over the
    retarded part D (eta_B > eta_A) of the window rectangle, where, with
    d = eta_B - eta_A and (h1, h2) = hankel_coefficients(alpha),

        r = g_alpha(eta_B, eta_A, k) - sin(k d)/2
            + h1 d cos(k d) / (2 k eta_A eta_B)
            - sin(k d) [h1^2/(eta_A eta_B) - h2 (eta_A^-2 + eta_B^-2)] / (2 k^2).

    The result decays like k**-5.
    """
    ks = np.atleast_1d(np.asarray(ks, dtype=float))
    h1, h2 = hankel_coefficients(alpha)
    out = np.empty(ks.shape)
    for i, k in enumerate(ks):
        f = _window_forms(k, alpha, a1, a2, b1, b2)
        out[i] = (
            0.5 * (f[0] - f[1])
            - 0.5 * (f[2] - f[3])
            - 0.5 * h1 / k * (f[4] + f[5] - f[6] - f[7])
            - (0.5 * h1 * h1 * (f[8] - f[9]) - 0.5 * h2 * (f[10] - f[11] + f[12] - f[13])) / (k * k)
        )
    return out
