"""Fixed quadrature tables shared by both kernel backends."""

import numpy as np
from numpy.polynomial import legendre

ORDER = 16

GL_NODES, GL_WEIGHTS = legendre.leggauss(ORDER)


def _cumulative_matrix(nodes):
    # row i: weights w_ij with sum_j w_ij f(t_j) = int_{-1}^{t_i} p(t) dt,
    # p the interpolant of f through the nodes
    n = len(nodes)
    inv_vander = np.linalg.inv(legendre.legvander(nodes, n - 1))
    out = np.empty((n, n))
    for j in range(n):
        out[:, j] = legendre.legval(nodes, legendre.legint(inv_vander[:, j], lbnd=-1))
    return out


GL_CUMULATIVE = _cumulative_matrix(GL_NODES)

# Panel widths (in units of 1/k) for the window meshes.  Cumulative
# integrals need interpolation accuracy, hence the finer triangle mesh.
RECT_PHASE_STEP = 6.0
TRI_PHASE_STEP = 2.0

# Bernoulli-series coefficients B_n/(n+1)! for Li2(x) = sum c_n u**(n+1),
# u = -log(1 - x); odd n > 1 vanish.
DILOG_BERNOULLI = (
    1.0,
    -0.25,
    0.027777777777777776,
    -0.0002777777777777778,
    4.72411186696901e-06,
    -9.185773074661964e-08,
    1.8978869988971e-09,
    -4.0647616451442256e-11,
    8.921691020456452e-13,
    -1.9939295860721074e-14,
    4.518980029619918e-16,
    -1.0356517612181247e-17,
    2.395218621026187e-19,
)
