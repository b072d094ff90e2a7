"""Pure-Python twin of the compiled kernel in ``_kernels.pyx``.

The arithmetic is ordered exactly as in the compiled loop so both backends
agree to the last bit.
"""

import numpy as np


def sos_process(coeffs, state, x):
    sections = [tuple(row) for row in np.asarray(coeffs, dtype=np.float64).tolist()]
    zs = [list(row) for row in state.tolist()]
    out = []
    for s in np.asarray(x, dtype=np.float64).tolist():
        for (b0, b1, b2, a1, a2), z in zip(sections, zs):
            z1, z2 = z
            w = s - a1 * z1 - a2 * z2
            s = b0 * w + b1 * z1 + b2 * z2
            z[1] = z1
            z[0] = w
        out.append(s)
    state[:, :] = zs
    return np.array(out, dtype=np.float64)
