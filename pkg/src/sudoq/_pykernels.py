"""Numpy implementations of the hot kernels.

These are the reference versions; ``_ckernels`` mirrors them loop by loop.
"""

from __future__ import annotations

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components


def _first_seen_labels(raw: np.ndarray) -> np.ndarray:
    # relabel so cluster ids follow the order of first appearance
    _, first = np.unique(raw, return_index=True)
    order = np.argsort(first)
    remap = np.empty(order.size, dtype=np.int64)
    remap[raw[first[order]]] = np.arange(order.size)
    return remap[raw]


def phase_clusters(vs: np.ndarray, threshold: float) -> np.ndarray:
    """Cluster rows of ``vs`` linked whenever ``|<u|v>| >= threshold``.

    Returns one label per row; labels are ``0..c-1`` in order of first
    appearance, so equal inputs always give equal labelings.
    """
    vs = np.ascontiguousarray(vs, dtype=np.complex128)
    adj = np.abs(vs.conj() @ vs.T) >= threshold
    _, raw = connected_components(csr_matrix(adj), directed=False)
    return _first_seen_labels(raw.astype(np.int64))


def overlap_power_sums(vs: np.ndarray, tmax: int) -> np.ndarray:
    """``out[t] = sum over ordered pairs (x, y) of |<x|y>|^(2t)``, ``t = 0..tmax``."""
    vs = np.ascontiguousarray(vs, dtype=np.complex128)
    a = np.abs(vs.conj() @ vs.T) ** 2
    out = np.empty(tmax + 1)
    p = np.ones_like(a)
    for t in range(tmax + 1):
        out[t] = p.sum()
        p = p * a
    return out


def violation_grad(z: np.ndarray, groups: np.ndarray, ref: np.ndarray,
                   free: np.ndarray, target: float, weight: float):
    """Total squared Gram residual over ``groups`` plus a distance penalty.

    Parameters
    ----------
    z : (ncells, d) complex
        Current cell amplitudes, fixed and free alike.
    groups : (ngroups, m) int
        Cell indices of each constraint group.
    ref : (ncells, d) complex
        Reference solution the penalty pushes away from.
    free : (ncells,) bool
        Cells that are optimization variables.
    target, weight : float
        Penalty ``weight * max(0, target - D)**2`` where
        ``D = sum_free ||z||^2 - |<ref|z>|^2``.

    Returns
    -------
    f : float
    grad : (ncells, d) complex
        Real gradient packed as ``dF/dRe + i dF/dIm``; zero on fixed cells.
    """
    c = z[groups]
    r = np.einsum("gai,gbi->gab", c.conj(), c)
    m = groups.shape[1]
    r[:, np.arange(m), np.arange(m)] -= 1.0
    f = float(np.sum(r.real ** 2 + r.imag ** 2))
    contrib = 4.0 * np.einsum("gba,gbi->gai", r, c)
    grad = np.zeros_like(z)
    np.add.at(grad, groups.ravel(), contrib.reshape(-1, z.shape[1]))

    if weight > 0.0:
        zf, rf = z[free], ref[free]
        proj = np.einsum("ci,ci->c", rf.conj(), zf)
        dist = float(np.sum(np.abs(zf) ** 2) - np.sum(np.abs(proj) ** 2))
        h = target - dist
        if h > 0.0:
            f += weight * h * h
            grad[free] += -4.0 * weight * h * (zf - rf * proj[:, None])
    grad[~free] = 0.0
    return f, grad
