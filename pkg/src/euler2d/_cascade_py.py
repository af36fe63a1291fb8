"""Pure-numpy cascade interpolation kernel (fallback for the compiled one).

Three stages of 1D 8-point Lagrange interpolation:
  1. along the image of each vertical grid line, interpolate the
     x-coordinate to the heights y = b_j of the horizontal lines;
  2. interpolate the carried vorticity along the same images to y = b_j;
  3. along each horizontal line, interpolate the vorticity from the hybrid
     points back to the uniform abscissae a_i.

Stencils take 4 nodes on each side of the target and wrap periodically
(node + period on index wrap).  Barycentric evaluation with an exact-node
shortcut makes the identity map reproduce inputs to rounding.
"""

import numpy as np

TWO_PI = 2.0 * np.pi
STENCIL = 8
HALF = STENCIL // 2


def _lagrange_rows(nodes, values, targets):
    """Barycentric Lagrange interpolation, vectorised over rows.

    nodes, values: (m, 8); targets: (m,).  Values may carry an extra leading
    axis for interpolating several fields on shared nodes.
    """
    diff = targets[..., None] - nodes  # (m, 8)
    # barycentric weights
    spread = nodes[..., None] - nodes[..., None, :]  # (m, 8, 8)
    np.einsum("...ii->...i", spread)[...] = 1.0
    w = 1.0 / np.prod(spread, axis=-1)  # (m, 8)

    exact = diff == 0.0
    hit = exact.any(axis=-1)
    diff_safe = np.where(exact, 1.0, diff)
    ratio = w / diff_safe
    num = np.sum(ratio * values, axis=-1)
    den = np.sum(ratio, axis=-1)
    interp = num / den
    if np.any(hit):
        exact_vals = np.sum(np.where(exact, values, 0.0), axis=-1)
        interp = np.where(hit, exact_vals, interp)
    return interp


def _interp_periodic_line(nodes, value_rows, targets, period=TWO_PI):
    """Interpolate along one periodic line.

    nodes: (n,) strictly increasing over one period (nodes[i+n] = nodes[i] +
    period).  value_rows: (r, n) fields sampled at the nodes, periodic in the
    index.  targets: (t,) arbitrary coordinates; each is reduced mod period
    into the node range.  Returns (r, t).
    """
    n = nodes.shape[0]
    t = nodes[0] + np.mod(targets - nodes[0], period)
    # locate the bracketing interval in the extended sequence
    n0 = np.searchsorted(nodes, t, side="right")  # in [1, n]
    idx = n0[:, None] - HALF + np.arange(STENCIL)[None, :]
    wrap, base = np.divmod(idx, n)
    node_st = nodes[base] + period * wrap
    val_st = value_rows[:, base]  # (r, t, 8)
    return _lagrange_rows(node_st, val_st, t)


def cascade(x, y, w):
    """Revert vorticity from the distorted grid to the uniform grid.

    x, y: (n, n) raw arrival coordinates indexed [i, j] (vertical line i,
    node j along it); w: (n, n) vorticity carried by the particles.
    Returns the (n, n) vorticity on the uniform grid, or raises ValueError
    when the hybrid abscissae are not strictly increasing.
    """
    n = x.shape[0]
    b = TWO_PI * np.arange(n) / n
    x_hybrid = np.empty((n, n))
    w_hybrid = np.empty((n, n))
    for i in range(n):
        rows = np.stack([x[i], w[i]])
        x_hybrid[i], w_hybrid[i] = _interp_periodic_line(y[i], rows, b)

    out = np.empty((n, n))
    for j in range(n):
        nodes = x_hybrid[:, j]
        d = np.diff(nodes)
        if np.any(d <= 0.0) or nodes[0] + TWO_PI <= nodes[-1]:
            raise ValueError(f"hybrid abscissae not strictly increasing on line {j}")
        out[:, j] = _interp_periodic_line(nodes, w_hybrid[None, :, j], b)[0]
    return out
