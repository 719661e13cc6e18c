"""Hot numeric kernels, each with a numba and a pure-numpy implementation.

The public names (``cms_transform``, ``stable_ou_pieces``, ``cp_accumulate``)
point at the numba variants unless ``SUPOU_DISABLE_NUMBA`` is set. Both
variants consume identical pre-drawn random inputs, so they agree to rounding.
"""
import math

import numpy as np

from ._accel import USE_NUMBA, njit

# 3-point Gauss-Legendre on [0, 1]
_GL_X = np.array([0.5 - 0.5 * math.sqrt(0.6), 0.5, 0.5 + 0.5 * math.sqrt(0.6)])
_GL_W = np.array([5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0])


# ---------------------------------------------------------------- numpy path

def cms_transform_numpy(v, w, gamma, rho):
    """Chambers-Mallows-Stuck map of ``V ~ U(-pi/2, pi/2)``, ``W ~ Exp(1)`` to S_gamma(1, rho, 0)."""
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    if gamma == 1.0:
        half = 0.5 * np.pi
        return (2.0 / np.pi) * ((half + rho * v) * np.tan(v)
                                - rho * np.log(half * w * np.cos(v) / (half + rho * v)))
    t = rho * math.tan(0.5 * math.pi * gamma)
    shift = math.atan(t) / gamma
    scale = (1.0 + t * t) ** (0.5 / gamma)
    arg = gamma * (v + shift)
    return (scale * np.sin(arg) / np.cos(v) ** (1.0 / gamma)
            * (np.cos(v - arg) / w) ** ((1.0 - gamma) / gamma))


def _piece_edges_numpy(tau, n_pieces, h_max):
    h = np.minimum(tau / n_pieces, h_max)
    j = np.arange(n_pieces + 1, dtype=float)
    edges = h[:, None] * j[None, :]
    edges[:, -1] = tau
    return edges


def stable_ou_pieces_numpy(xi, tau, unit_scale, gamma, rho, v, w, h_max=0.5):
    """Stochastic parts of one exact-in-marginal OU step with a stable driver.

    Returns ``(A, B)`` with ``A = int e^{-u} dL`` and ``B = int (1 - e^{-u}) / xi dL``
    over the last ``tau`` units of driver time, ``u`` measured back from the end.
    ``v``, ``w`` have shape ``(m, n_pieces)``.
    """
    n = v.shape[1]
    edges = _piece_edges_numpy(tau, n, h_max)
    w0 = edges[:, :-1]
    hj = edges[:, 1:] - w0
    safe_h = np.where(hj > 0, hj, 1.0)
    a_pow = np.exp(-gamma * w0) * (-np.expm1(-gamma * safe_h)) / (gamma * safe_h)
    b_pow = np.zeros_like(hj)
    for x, wt in zip(_GL_X, _GL_W):
        b_pow += wt * (-np.expm1(-(w0 + x * safe_h))) ** gamma
    z = cms_transform_numpy(v, w, gamma, rho)
    s = unit_scale * hj ** (1.0 / gamma) * z
    a = (a_pow ** (1.0 / gamma) * s).sum(axis=1)
    b = (b_pow ** (1.0 / gamma) * s).sum(axis=1) / xi
    return a, b


def cp_accumulate_numpy(owner, w, x, xi, m):
    """Sum jump contributions per OU: ``A = sum x e^{-w}``, ``B = sum x (1 - e^{-w}) / xi``."""
    a = np.bincount(owner, weights=x * np.exp(-w), minlength=m)
    b = np.bincount(owner, weights=x * -np.expm1(-w), minlength=m) / xi
    return a, b


# ---------------------------------------------------------------- numba path

@njit
def _cms_scalar(v, w, gamma, rho, shift, scale):
    if gamma == 1.0:
        half = 0.5 * np.pi
        return (2.0 / np.pi) * ((half + rho * v) * math.tan(v)
                                - rho * math.log(half * w * math.cos(v) / (half + rho * v)))
    arg = gamma * (v + shift)
    return (scale * math.sin(arg) / math.cos(v) ** (1.0 / gamma)
            * (math.cos(v - arg) / w) ** ((1.0 - gamma) / gamma))


@njit
def _cms_consts(gamma, rho):
    if gamma == 1.0:
        return 0.0, 1.0
    t = rho * math.tan(0.5 * math.pi * gamma)
    return math.atan(t) / gamma, (1.0 + t * t) ** (0.5 / gamma)


@njit
def cms_transform_numba(v, w, gamma, rho):
    shift, scale = _cms_consts(gamma, rho)
    vf = v.ravel()
    wf = w.ravel()
    out = np.empty(vf.size)
    for i in range(vf.size):
        out[i] = _cms_scalar(vf[i], wf[i], gamma, rho, shift, scale)
    return out.reshape(v.shape)


@njit
def stable_ou_pieces_numba(xi, tau, unit_scale, gamma, rho, v, w, h_max=0.5):
    m, n = v.shape
    shift, scale = _cms_consts(gamma, rho)
    inv_g = 1.0 / gamma
    gx0 = 0.5 - 0.5 * math.sqrt(0.6)
    gx2 = 0.5 + 0.5 * math.sqrt(0.6)
    a = np.zeros(m)
    b = np.zeros(m)
    for k in range(m):
        h = min(tau[k] / n, h_max)
        acc_a = 0.0
        acc_b = 0.0
        for j in range(n):
            w0 = h * j
            w1 = tau[k] if j == n - 1 else h * (j + 1)
            hj = w1 - w0
            if hj <= 0.0:
                continue
            a_pow = math.exp(-gamma * w0) * (-math.expm1(-gamma * hj)) / (gamma * hj)
            b_pow = (5.0 * (-math.expm1(-(w0 + gx0 * hj))) ** gamma
                     + 8.0 * (-math.expm1(-(w0 + 0.5 * hj))) ** gamma
                     + 5.0 * (-math.expm1(-(w0 + gx2 * hj))) ** gamma) / 18.0
            z = _cms_scalar(v[k, j], w[k, j], gamma, rho, shift, scale)
            s = unit_scale * hj ** inv_g * z
            acc_a += a_pow ** inv_g * s
            acc_b += b_pow ** inv_g * s
        a[k] = acc_a
        b[k] = acc_b / xi[k]
    return a, b


@njit
def cp_accumulate_numba(owner, w, x, xi, m):
    a = np.zeros(m)
    b = np.zeros(m)
    for i in range(owner.size):
        k = owner[i]
        a[k] += x[i] * math.exp(-w[i])
        b[k] += x[i] * -math.expm1(-w[i])
    for k in range(m):
        b[k] /= xi[k]
    return a, b


if USE_NUMBA:
    cms_transform = cms_transform_numba
    stable_ou_pieces = stable_ou_pieces_numba
    cp_accumulate = cp_accumulate_numba
else:
    cms_transform = cms_transform_numpy
    stable_ou_pieces = stable_ou_pieces_numpy
    cp_accumulate = cp_accumulate_numpy
