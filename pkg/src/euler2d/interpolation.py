"""Semi-Lagrangian reversion of the vorticity to the uniform grid.

The cascade kernel exists in two interchangeable implementations: a
compiled extension and a pure-numpy fallback.  The compiled one is used
when importable unless EULER2D_PURE_PYTHON is set.  benchmarks/bench_cascade.py
compares the two.
"""

import os

import numpy as np

from . import _cascade_py, spectral
from .errors import ReversionError

if os.environ.get("EULER2D_PURE_PYTHON"):
    _kernel = _cascade_py
    KERNEL = "python"
else:
    try:
        from . import _cascade_cy as _kernel

        KERNEL = "compiled"
    except ImportError:
        _kernel = _cascade_py
        KERNEL = "python"

TWO_PI = 2.0 * np.pi


def check_monotonicity(state):
    """Verify y(a_i, b) increases strictly along every vertical line.

    Returns (ok, report) where the report lists violating line indices;
    never raises, the caller decides how to react.
    """
    y = state.positions[1]
    n = y.shape[0]
    interior = np.diff(y, axis=1) > 0.0
    wrap = y[:, 0] + TWO_PI - y[:, -1] > 0.0
    ok_lines = interior.all(axis=1) & wrap
    violating = np.nonzero(~ok_lines)[0].tolist()
    return len(violating) == 0, violating


def cascade_revert(state):
    """Interpolate the carried vorticity back to the uniform grid.

    Raises ReversionError on monotonicity violation (either direction of
    the hybrid construction).
    """
    ok, report = check_monotonicity(state)
    if not ok:
        raise ReversionError(
            f"monotonicity violated on {len(report)} vertical line(s)", report=report
        )
    x, y = state.positions
    try:
        return _kernel.cascade(
            np.ascontiguousarray(x),
            np.ascontiguousarray(y),
            np.ascontiguousarray(state.lagrangian_vorticity),
        )
    except ValueError as exc:
        raise ReversionError(str(exc)) from exc


def slow_fourier_check(reverted, state, sample_points):
    """Direct Fourier-series evaluation at distorted-grid sample points.

    reverted: spectral field of the reverted vorticity.  sample_points:
    iterable of (i, j) grid indices.  Returns the max absolute mismatch
    against the vorticity carried by the state.
    """
    sample_points = list(sample_points)
    if not sample_points:
        return 0.0
    n = reverted.shape[-1]
    k1, k2 = spectral.wavegrid(n)
    worst = 0.0
    for i, j in sample_points:
        xp = state.positions[0][i, j]
        yp = state.positions[1][i, j]
        val = np.real(np.sum(reverted * np.exp(1j * (k1 * xp + k2 * yp))))
        worst = max(worst, abs(val - state.lagrangian_vorticity[i, j]))
    return worst
