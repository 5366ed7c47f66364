"""Numpy reference kernels; the compiled module mirrors these signatures.

The tree product vectorizes per BFS level (children of one level share no
dependencies), which keeps the pure fallback usable at depth 20.
"""

import numpy as np

BACKEND = "pure"


def tree_cocycles(parents, tmats):
    """Compose 2x2 matrices down a forest: out[i] = out[parents[i]] @ tmats[i].

    parents[i] < i; roots have parent -1 and out[root] = tmats[root].
    Every product is renormalized to determinant 1.
    """
    parents = np.asarray(parents, dtype=np.int64)
    tmats = np.asarray(tmats, dtype=np.float64)
    n = parents.shape[0]
    out = np.array(tmats, copy=True)
    if n == 0:
        return out
    level = np.zeros(n, dtype=np.int64)
    for i in range(n):
        p = parents[i]
        if p >= 0:
            level[i] = level[p] + 1
    for lev in range(1, int(level.max()) + 1):
        idx = np.nonzero(level == lev)[0]
        prod = out[parents[idx]] @ tmats[idx]
        det = prod[:, 0, 0] * prod[:, 1, 1] - prod[:, 0, 1] * prod[:, 1, 0]
        prod /= np.sqrt(det)[:, None, None]
        out[idx] = prod
    return out


def apply_proj_batch(mats, pts):
    """Row-wise projective action: mats (n,2,2) on pts (n,2), returning (n,2)."""
    mats = np.asarray(mats, dtype=np.float64)
    pts = np.asarray(pts, dtype=np.float64)
    out = np.empty_like(pts)
    out[:, 0] = mats[:, 0, 0] * pts[:, 0] + mats[:, 0, 1] * pts[:, 1]
    out[:, 1] = mats[:, 1, 0] * pts[:, 0] + mats[:, 1, 1] * pts[:, 1]
    return out


def shear_quads(quads):
    """Shears of pre-arranged projective quadruples (a, b, c, d), rows (n,4,2).

    The quadruple must be negatively cyclically ordered with diagonal (a, c);
    the result is ln(-(D(d,a) D(b,c)) / (D(d,c) D(b,a))) with D the projective
    difference.  Degenerate rows come back as nan.
    """
    q = np.asarray(quads, dtype=np.float64)

    def pd(u, v):
        return u[:, 0] * v[:, 1] - v[:, 0] * u[:, 1]

    a, b, c, d = q[:, 0], q[:, 1], q[:, 2], q[:, 3]
    with np.errstate(divide="ignore", invalid="ignore"):
        arg = -(pd(d, a) * pd(b, c)) / (pd(d, c) * pd(b, a))
        out = np.log(arg)
    return out
