"""Pure-numpy implementations of the grid kernels.

These are the fallback twins of the compiled ``sobstab._kernels``
extension; both expose the same functions with the same contracts.
Phase arguments are table lookups with integer-mod indices, so a mode-k
value at grid point j is ``costab[(k*j) % n]`` with ``costab`` holding one
exact period of cos(2*pi*m/n).
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def circle_synth(a0, ac, bs, costab, sintab):
    """Evaluate a0 + sum_k ac[k-1] cos(2pi k t_j) + bs[k-1] sin(2pi k t_j) on t_j = j/n."""
    n = costab.shape[0]
    j = np.arange(n)
    out = np.full(n, a0, dtype=float)
    for k in range(1, ac.shape[0] + 1):
        a = ac[k - 1]
        b = bs[k - 1]
        if a == 0.0 and b == 0.0:
            continue
        idx = (k * j) % n
        if a != 0.0:
            out += a * costab[idx]
        if b != 0.0:
            out += b * sintab[idx]
    return out


def uniform_power_mean(vals, q):
    """Mean of |v|^q over the grid (the periodic trapezoidal rule on [0,1))."""
    return float(np.mean(np.abs(vals) ** q))


def weighted_power_sum(vals, weights, q):
    """sum_i weights[i] * |vals[i]|^q."""
    return float(np.dot(weights, np.abs(vals) ** q))


def zonal_synth(coeffs, table):
    """Combine zonal-basis rows: table is (L+1, n), coeffs is (L+1,)."""
    return table.T @ coeffs


def tensor_synth(pc, ps, costab, sintab):
    """Expand Fourier-mode profiles along the circle axis of a product grid.

    pc, ps have shape (K+1, n_x): row k is the latitude profile multiplying
    cos/sin of circle mode k (row 0 of ps is ignored; sin(0) = 0).
    Returns the (n_s, n_x) grid of values.
    """
    n = costab.shape[0]
    kmax = pc.shape[0] - 1
    j = np.arange(n)
    idx = (np.arange(kmax + 1)[:, None] * j[None, :]) % n
    ct = costab[idx]
    st = sintab[idx]
    st[0, :] = 0.0
    return ct.T @ pc + st.T @ ps


def tensor_power_sum(grid, col_weights, q):
    """sum_ij col_weights[j] * |grid[i, j]|^q."""
    return float(np.sum((np.abs(grid) ** q) @ col_weights))
