"""Numpy implementations of the oracle kernels (fallback for ``_ckernels``)."""

import numpy as np


def projected_stats(D, B, axis_unit, dots, norms, perps):
    C = D @ B.T
    dots[:] = C @ axis_unit
    norms[:] = np.linalg.norm(C, axis=1)
    perps[:] = np.linalg.norm(C - np.outer(dots, axis_unit), axis=1)


def cone_margins(D, axis, cos_phi, out):
    vn = np.linalg.norm(axis)
    dn = np.linalg.norm(D, axis=1)
    out[:] = (D @ axis - cos_phi * dn * vn) / (dn * vn + 1.0)


def cap_directions(G, vhat, cos_t, sin_t, out):
    W = G - np.outer(G @ vhat, vhat)
    wn = np.linalg.norm(W, axis=1)
    scale = np.divide(sin_t, wn, out=np.zeros_like(wn), where=wn > 0)
    out[:] = np.outer(cos_t, vhat) + scale[:, None] * W
