# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: dilogarithm, closed-form signal terms, window-integrated
mode kernel.  Function-for-function twin of ``_pykernels``."""

import numpy as np

from libc.math cimport ceil, cos, fabs, fmax, fmin, log, log1p, sin, sqrt, M_PI
from scipy.special.cython_special cimport jv, yv

from ._quadrules import (
    DILOG_BERNOULLI,
    GL_CUMULATIVE,
    GL_NODES,
    GL_WEIGHTS,
    RECT_PHASE_STEP,
    TRI_PHASE_STEP,
)

cdef enum:
    NQ = 16
    NBASIS = 8
    NPAIRS = 14
    NBERN = 13

cdef double GLT[NQ]
cdef double GLW[NQ]
cdef double CUM[NQ][NQ]
cdef double BERN[NBERN]
cdef double RECT_STEP = RECT_PHASE_STEP
cdef double TRI_STEP = TRI_PHASE_STEP
cdef double PI2_6 = M_PI * M_PI / 6.0

for _i in range(NQ):
    GLT[_i] = GL_NODES[_i]
    GLW[_i] = GL_WEIGHTS[_i]
    for _j in range(NQ):
        CUM[_i][_j] = GL_CUMULATIVE[_i, _j]
for _i in range(NBERN):
    BERN[_i] = DILOG_BERNOULLI[_i]

# (f, h) basis indices: J=0, Y=1, S=2, C=3, S/x=4, C/x=5, S/x^2=6, C/x^2=7
cdef int PF[NPAIRS]
cdef int PH[NPAIRS]
PF[:] = [1, 0, 2, 3, 5, 4, 3, 2, 4, 5, 2, 3, 6, 7]
PH[:] = [0, 1, 3, 2, 3, 2, 5, 4, 5, 4, 7, 6, 3, 2]


cdef double _dilog_core(double x) noexcept nogil:
    cdef double u = -log1p(-x)
    cdef double u2 = u * u
    cdef double total = BERN[0] * u + BERN[1] * u2
    cdef double power = u
    cdef int i
    for i in range(2, NBERN):
        power *= u2
        total += BERN[i] * power
    return total


cdef double _dilog(double x) noexcept nogil:
    cdef double lg
    if x == 1.0:
        return PI2_6
    if x < -1.0:
        lg = log(-x)
        return -PI2_6 - 0.5 * lg * lg - _dilog(1.0 / x)
    if x < -0.5:
        lg = log1p(-x)
        return -_dilog_core(x / (x - 1.0)) - 0.5 * lg * lg
    if x <= 0.5:
        return _dilog_core(x)
    return PI2_6 - log(x) * log1p(-x) - _dilog_core(1.0 - x)


def dilog(double x):
    """Real dilogarithm Li2(x) for x <= 1."""
    if not x <= 1.0:
        raise ValueError(f"dilog argument {x} > 1 is on the branch cut")
    return _dilog(x)


def dilog_array(x):
    arr = np.ascontiguousarray(x, dtype=float)
    if np.any(~(arr <= 1.0)):
        raise ValueError("dilog arguments must be <= 1")
    flat = arr.ravel()
    out = np.empty_like(flat)
    cdef double[::1] xv = flat
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(xv.shape[0]):
            ov[i] = _dilog(xv[i])
    return out.reshape(arr.shape)


cdef int _classify(double a1, double a2, double b1, double b2, double R) noexcept nogil:
    cdef double u = a1 + R
    cdef double v = a2 + R
    if b2 <= u:
        return 1
    if b1 >= v:
        return 5
    if b1 < u:
        return 2 if b2 <= v else 6
    return 3 if b2 <= v else 4


def classify(double a1, double a2, double b1, double b2, double R):
    return _classify(a1, a2, b1, b2, R)


cdef int _terms(double a1, double a2, double b1, double b2, double R,
                double* sd, double* st) noexcept nogil:
    cdef int case = _classify(a1, a2, b1, b2, R)
    cdef double top, bottom, x1, x2, lx1, lx2
    if case == 1:
        sd[0] = 0.0
        st[0] = 0.0
        return case
    if case == 5:
        sd[0] = 0.0
        st[0] = log(a2 / a1) * log(b2 / b1)
        return case
    top = fmin(a2 + R, b2)
    bottom = fmax(a1 + R, b1)
    sd[0] = (top - bottom) / R
    x1 = fmin(a2, b2 - R)
    x2 = fmax(a1, b1 - R)
    lx1 = log(x1 / a1)
    lx2 = log(x2 / a1)
    st[0] = (lx1 * log(top / R) + _dilog(-x1 / R)
             - lx2 * log(bottom / R) - _dilog(-x2 / R)
             + lx1 * log(b2 / top))
    return case


def signal_terms_scalar(double a1, double a2, double b1, double b2, double R):
    """(case, S_delta, S_theta) for conformal windows [a1,a2] (A) and [b1,b2] (B)."""
    cdef double sd, st
    cdef int case = _terms(a1, a2, b1, b2, R, &sd, &st)
    return case, sd, st


def signal_terms(a1, a2, b1, b2, R):
    arrs = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (a1, a2, b1, b2, R)))
    shape = arrs[0].shape
    flat = [np.ascontiguousarray(a).ravel() for a in arrs]
    cdef Py_ssize_t n = flat[0].shape[0]
    cases = np.empty(n, dtype=np.int64)
    sd = np.empty(n)
    st = np.empty(n)
    cdef double[::1] va1 = flat[0], va2 = flat[1], vb1 = flat[2], vb2 = flat[3], vr = flat[4]
    cdef double[::1] vsd = sd, vst = st
    cdef long long[::1] vc = cases
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            vc[i] = _terms(va1[i], va2[i], vb1[i], vb2[i], vr[i], &vsd[i], &vst[i])
    return cases.reshape(shape), sd.reshape(shape), st.reshape(shape)


# -- window-integrated mode kernel -------------------------------------------

cdef inline double _hankel_threshold(double alpha) noexcept nogil:
    return 25.0 + 1.5 * alpha * alpha


cdef void _hankel_pq(double alpha, double x, double* P, double* Q) noexcept nogil:
    # P, Q of the large-argument expansion; caller guarantees x above threshold
    cdef double mu = 4.0 * alpha * alpha
    cdef double term = 1.0
    cdef double p = 1.0, q = 0.0
    cdef double prev = 1.0
    cdef double odd
    cdef int m
    for m in range(1, 80):
        odd = 2.0 * m - 1.0
        term *= (mu - odd * odd) / (8.0 * m * x)
        if m % 4 == 1:
            q += term
        elif m % 4 == 2:
            p -= term
        elif m % 4 == 3:
            q -= term
        else:
            p += term
        if term == 0.0 or (m > 2 and fabs(term) < 1e-17 and fabs(term) <= prev):
            break
        prev = fabs(term)
    P[0] = p
    Q[0] = q


def hankel_bessel(double alpha, double x):
    """(J_alpha(x), Y_alpha(x)) from the large-argument expansion (testing aid)."""
    cdef double P, Q, chi = x - (0.5 * alpha + 0.25) * M_PI
    _hankel_pq(alpha, x, &P, &Q)
    cdef double amp = sqrt(2.0 / (M_PI * x))
    return amp * (P * cos(chi) - Q * sin(chi)), amp * (P * sin(chi) + Q * cos(chi))


cdef inline void _basis(double x, double k, double alpha, double* out) noexcept nogil:
    cdef double kx = k * x
    cdef double sn = sin(kx)
    cdef double cs = cos(kx)
    cdef double s, P, Q, phase, cphi, sphi, cchi, schi
    cdef double inv = 1.0 / x
    if kx > _hankel_threshold(alpha):
        _hankel_pq(alpha, kx, &P, &Q)
        phase = (0.5 * alpha + 0.25) * M_PI
        cphi = cos(phase)
        sphi = sin(phase)
        cchi = cs * cphi + sn * sphi
        schi = sn * cphi - cs * sphi
        out[0] = P * cchi - Q * schi
        out[1] = P * schi + Q * cchi
    else:
        s = sqrt(0.5 * M_PI * kx)
        out[0] = s * jv(alpha, kx)
        out[1] = s * yv(alpha, kx)
    out[2] = sn
    out[3] = cs
    out[4] = sn * inv
    out[5] = cs * inv
    out[6] = sn * inv * inv
    out[7] = cs * inv * inv


cdef int _next_edge(double x, double q, double hmax, Py_ssize_t* remaining,
                    double* width, double* edge) noexcept nogil:
    # advance one panel of the mesh used by _pykernels._mesh; 0 when done
    if remaining[0] > 0:
        remaining[0] -= 1
        edge[0] = q if remaining[0] == 0 else x + width[0]
        return 1
    if x >= q:
        return 0
    if x < hmax:
        edge[0] = fmin(2.0 * x, q)
        return 1
    remaining[0] = <Py_ssize_t>ceil((q - x) / hmax)
    width[0] = (q - x) / remaining[0]
    remaining[0] -= 1
    edge[0] = q if remaining[0] == 0 else x + width[0]
    return 1


cdef void _rect_moments(double p, double q, double k, double alpha, double* mom) noexcept nogil:
    cdef double vals[NBASIS]
    cdef double x0 = p, x1, half, mid, wt
    cdef double hmax = RECT_STEP / k
    cdef double width = 0.0
    cdef Py_ssize_t remaining = 0
    cdef int i, b
    for b in range(NBASIS):
        mom[b] = 0.0
    while _next_edge(x0, q, hmax, &remaining, &width, &x1):
        half = 0.5 * (x1 - x0)
        mid = 0.5 * (x1 + x0)
        for i in range(NQ):
            _basis(half * GLT[i] + mid, k, alpha, vals)
            wt = GLW[i] * half
            for b in range(NBASIS):
                mom[b] += wt * vals[b]
        x0 = x1


cdef void _triangle_forms(double p, double q, double k, double alpha, double* forms) noexcept nogil:
    cdef double vals[NBASIS][NQ]
    cdef double prefix[NBASIS]
    cdef double H[NBASIS]
    cdef double tmp[NBASIS]
    cdef double x0 = p, x1, half, mid, acc
    cdef double hmax = TRI_STEP / k
    cdef double width = 0.0
    cdef Py_ssize_t remaining = 0
    cdef int i, m, b, j
    for b in range(NBASIS):
        prefix[b] = 0.0
    while _next_edge(x0, q, hmax, &remaining, &width, &x1):
        half = 0.5 * (x1 - x0)
        mid = 0.5 * (x1 + x0)
        for i in range(NQ):
            _basis(half * GLT[i] + mid, k, alpha, tmp)
            for b in range(NBASIS):
                vals[b][i] = tmp[b]
        for i in range(NQ):
            for b in range(NBASIS):
                acc = 0.0
                for m in range(NQ):
                    acc += CUM[i][m] * vals[b][m]
                H[b] = prefix[b] + half * acc
            for j in range(NPAIRS):
                forms[j] += GLW[i] * half * vals[PF[j]][i] * H[PH[j]]
        for b in range(NBASIS):
            acc = 0.0
            for i in range(NQ):
                acc += GLW[i] * vals[b][i]
            prefix[b] += half * acc
        x0 = x1


cdef void _window_forms(double k, double alpha, double a1, double a2,
                        double b1, double b2, double* forms) noexcept nogil:
    cdef double mx[NBASIS]
    cdef double my[NBASIS]
    cdef double lo = fmax(b1, a2)
    cdef double o1 = fmax(a1, b1)
    cdef double o2 = fmin(a2, b2)
    cdef int j
    for j in range(NPAIRS):
        forms[j] = 0.0
    if lo < b2:
        _rect_moments(a1, a2, k, alpha, mx)
        _rect_moments(lo, b2, k, alpha, my)
        for j in range(NPAIRS):
            forms[j] += my[PF[j]] * mx[PH[j]]
    if o1 < o2:
        if a1 < o1:
            _rect_moments(a1, o1, k, alpha, mx)
            _rect_moments(o1, o2, k, alpha, my)
            for j in range(NPAIRS):
                forms[j] += my[PF[j]] * mx[PH[j]]
        _triangle_forms(o1, o2, k, alpha, forms)


def hankel_coefficients(double alpha):
    """First two large-argument coefficients a1, a2 of J/Y for order alpha."""
    cdef double mu = 4.0 * alpha * alpha
    return (mu - 1.0) / 8.0, (mu - 1.0) * (mu - 9.0) / 128.0


def window_remainder(double alpha, ks, double a1, double a2, double b1, double b2):
    """Window-integrated mode kernel minus its asymptotic expansion to O(k^-2).

    See ``_pykernels.window_remainder`` for the definition.
    """
    karr = np.ascontiguousarray(np.atleast_1d(ks), dtype=float)
    out = np.empty_like(karr)
    cdef double[::1] kv = karr
    cdef double[::1] ov = out
    cdef double f[NPAIRS]
    cdef double mu = 4.0 * alpha * alpha
    cdef double h1 = (mu - 1.0) / 8.0
    cdef double h2 = (mu - 1.0) * (mu - 9.0) / 128.0
    cdef double k
    cdef Py_ssize_t i
    with nogil:
        for i in range(kv.shape[0]):
            k = kv[i]
            _window_forms(k, alpha, a1, a2, b1, b2, f)
            ov[i] = (0.5 * (f[0] - f[1])
                     - 0.5 * (f[2] - f[3])
                     - 0.5 * h1 / k * (f[4] + f[5] - f[6] - f[7])
                     - (0.5 * h1 * h1 * (f[8] - f[9])
                        - 0.5 * h2 * (f[10] - f[11] + f[12] - f[13])) / (k * k))
    return out
