"""Kernel backend selection and shared grid tables.

At import time the compiled Cython extension is preferred; the
pure-numpy twin is used when the extension is missing or when
``SOBSTAB_FORCE_PYTHON=1`` is set. ``BACKEND`` names the active choice.
"""

from __future__ import annotations

import os
from functools import lru_cache

import numpy as np

from . import _kernels_py

if os.environ.get("SOBSTAB_FORCE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

BACKEND: str = _impl.BACKEND

circle_synth = _impl.circle_synth
uniform_power_mean = _impl.uniform_power_mean
weighted_power_sum = _impl.weighted_power_sum
zonal_synth = _impl.zonal_synth
tensor_synth = _impl.tensor_synth
tensor_power_sum = _impl.tensor_power_sum


def available_backends():
    """Return the importable backend modules, keyed by name."""
    backends = {_kernels_py.BACKEND: _kernels_py}
    try:
        from . import _kernels

        backends[_kernels.BACKEND] = _kernels
    except ImportError:
        pass
    return backends


@lru_cache(maxsize=32)
def phase_tables(n: int):
    """One exact period of cos/sin: table[m] = cos(2*pi*m/n), m = 0..n-1.

    Mode-k values on the uniform grid t_j = j/n are then lookups at
    (k*j) mod n, which keeps phases exactly reduced for every mode.
    """
    m = np.arange(n)
    costab = np.cos(2.0 * np.pi * m / n)
    sintab = np.sin(2.0 * np.pi * m / n)
    costab.setflags(write=False)
    sintab.setflags(write=False)
    return costab, sintab
