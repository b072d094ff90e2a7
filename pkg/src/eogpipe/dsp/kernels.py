"""Backend selection for the hot filter loop.

The compiled extension is used when it was built; otherwise the pure-Python
loop is used. ``BACKEND`` reports which one was picked at import.
"""

import numpy as np

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"

_impl = _compiled.sos_process if _compiled is not None else _kernels_py.sos_process


def sos_process(coeffs: np.ndarray, state: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Filter ``x`` through the section stack, mutating ``state``.

    Parameters
    ----------
    coeffs : ndarray, shape (n_sections, 5)
        Rows of ``(b0, b1, b2, a1, a2)``.
    state : ndarray, shape (n_sections, 2)
        Rows of ``(z1, z2)``; C-contiguous float64, updated in place.
    x : ndarray, shape (n,)
    """
    coeffs = np.ascontiguousarray(coeffs, dtype=np.float64)
    x = np.ascontiguousarray(x, dtype=np.float64)
    if state.dtype != np.float64 or not state.flags.c_contiguous:
        raise TypeError("state must be a C-contiguous float64 array")
    return _impl(coeffs, state, x)


def python_sos_process(coeffs, state, x):
    return _kernels_py.sos_process(coeffs, state, x)


def compiled_sos_process(coeffs, state, x):
    if _compiled is None:
        raise RuntimeError("compiled kernel not available")
    return _compiled.sos_process(
        np.ascontiguousarray(coeffs, dtype=np.float64),
        state,
        np.ascontiguousarray(x, dtype=np.float64),
    )
