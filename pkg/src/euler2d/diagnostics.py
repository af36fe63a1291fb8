"""Spectra, conservation measures, and series-asymptotics fits.

The radius of convergence of a positive-coefficient power series f_s is
read off a least-squares fit of ln f_s against {1, ln s, s}: the model is
f_s ~ gamma * s^alpha * e^(beta*s) and R = e^(-beta).  The same machinery
fits the exponential tail of the enstrophy spectrum, E(K) ~ C K^n e^(-2
delta K), giving the analyticity-strip radius delta.
"""

from dataclasses import dataclass, field as dc_field

import numpy as np

from . import eulerian, lagrangian, spectral
from .errors import InsufficientDataError


@dataclass
class FitReport:
    alpha: float
    beta: float
    gamma: float
    radius: float
    fit_window: tuple
    discrepancies: dict = dc_field(default_factory=dict)  # s -> d_s
    max_scaled_discrepancy: float = 0.0


@dataclass
class SpectrumReport:
    shells: np.ndarray  # E(K) for K = 0..len-1
    delta: float | None = None
    exponent: float | None = None
    prefactor: float | None = None


def vorticity_spectrum(omega):
    """Enstrophy shells E(K) = (1/2) sum_{K <= |k| < K+1} |coeff|^2."""
    n = omega.shape[-1]
    k1, k2 = spectral.wavegrid(n)
    shell = np.floor(np.sqrt(k1 * k1 + k2 * k2)).astype(np.int64)
    e = 0.5 * np.abs(omega) ** 2
    shells = np.bincount(shell.ravel(), weights=e.ravel())
    return SpectrumReport(shells=shells)


def fit_log_linear(values, window):
    """Least squares of ln(values_s) against {1, ln s, s} over s in window.

    values is 1-based: values[0] is f_1.  Returns the fitted (alpha, beta,
    gamma), the radius e^(-beta), and the per-order discrepancies d_s over
    the window.
    """
    s_min, s_max = window
    values = np.asarray(values, dtype=np.float64)
    s_max = min(s_max, len(values))
    s = np.arange(s_min, s_max + 1)
    if len(s) < 4:
        raise InsufficientDataError("fit window shorter than 4 points")
    f = values[s - 1]
    if np.any(f <= 0.0) or not np.all(np.isfinite(f)):
        raise ValueError("fit window contains non-positive values")
    big_f = np.log(f)
    design = np.column_stack([np.ones_like(s, dtype=float), np.log(s), s])
    (c, a, b), *_ = np.linalg.lstsq(design, big_f, rcond=None)
    d = c + a * np.log(s) + b * s - big_f
    tail = s >= (s_min + s_max) // 2
    return FitReport(
        alpha=float(a),
        beta=float(b),
        gamma=float(np.exp(c)),
        radius=float(np.exp(-b)),
        fit_window=(int(s_min), int(s_max)),
        discrepancies={int(si): float(di) for si, di in zip(s, d)},
        max_scaled_discrepancy=float(np.max(np.abs(d[tail] / s[tail]))),
    )


def radius_estimators(values, tail_fraction=0.5):
    """Classical radius estimators from the coefficient sequence.

    Cauchy-Hadamard over the tail, the last-ratio estimate, and the
    Domb-Sykes point list (1/s, f_s/f_{s-1}) for external plotting.
    """
    values = np.asarray(values, dtype=np.float64)
    if len(values) < 2:
        raise InsufficientDataError("need at least 2 coefficients")
    s = np.arange(1, len(values) + 1)
    tail_start = int(len(values) * (1.0 - tail_fraction))
    roots = values[tail_start:] ** (1.0 / s[tail_start:])
    hadamard = float(1.0 / np.max(roots))
    ratio = float(values[-2] / values[-1])
    domb_sykes = [
        (1.0 / si, values[si - 1] / values[si - 2]) for si in range(2, len(values) + 1)
    ]
    return {"hadamard": hadamard, "ratio": ratio, "domb_sykes": domb_sykes}


def fit_analyticity_delta(spec, window):
    """Fill delta/exponent by fitting ln E(K) against {1, ln K, K}."""
    k_min, k_max = window
    k_max = min(k_max, len(spec.shells) - 1)
    k = np.arange(k_min, k_max + 1)
    if len(k) < 4:
        raise InsufficientDataError("fit window shorter than 4 points")
    e = spec.shells[k]
    if np.any(e <= 0.0):
        raise ValueError("fit window contains empty shells")
    design = np.column_stack([np.ones_like(k, dtype=float), np.log(k), k])
    (c, nexp, slope), *_ = np.linalg.lstsq(design, np.log(e), rcond=None)
    return SpectrumReport(
        shells=spec.shells,
        delta=float(-slope / 2.0),
        exponent=float(nexp),
        prefactor=float(np.exp(c)),
    )


def energy(omega):
    """Kinetic energy (1/2) sum_k |v_k|^2."""
    v = spectral.velocity_from_vorticity(omega)
    return 0.5 * float(np.sum(np.abs(v) ** 2))


def enstrophy(omega):
    """(1/2) sum_k |omega_k|^2."""
    return 0.5 * float(np.sum(np.abs(omega) ** 2))


def max_discrepancy(a, b):
    """Max over the periodicity box of |a - b| for grid fields."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.max(np.abs(a - b)))


def detect_transition(values, decades=3.0, s_min=4):
    """First order where rounding noise overwhelms the coefficient decay.

    Fits the log-linear trend over the clean stretch (up to the sequence
    minimum) and returns the first s whose value exceeds the extrapolated
    trend by the given number of decades, or None.
    """
    values = np.asarray(values, dtype=np.float64)
    if len(values) < s_min + 3:
        return None
    positive = values > 0.0
    if not positive.all():
        first_bad = int(np.argmin(positive)) + 1
        values = values[: first_bad - 1]
        if len(values) < s_min + 3:
            return None
    s_at_min = int(np.argmin(values)) + 1
    if s_at_min >= len(values):
        return None
    fit_end = max(s_at_min, s_min + 3)
    try:
        fit = fit_log_linear(values, (s_min, fit_end))
    except (InsufficientDataError, ValueError):
        return None
    s = np.arange(1, len(values) + 1)
    trend = np.log(fit.gamma) + fit.alpha * np.log(s) + fit.beta * s
    excess = np.log(values) - trend
    beyond = np.nonzero((s > s_at_min) & (excess > decades * np.log(10.0)))[0]
    if len(beyond) == 0:
        return None
    return int(s[beyond[0]])


def coefficient_norm_probe(omega, s_max_lagrangian, s_max_eulerian, decades=3.0):
    """Deep Taylor-coefficient norm sequences and their transition orders.

    Builds, from the same vorticity, the displacement stack (Lagrangian)
    and the vorticity stack (Eulerian) and reports each norm sequence with
    its detected rounding-noise transition order.
    """
    v = spectral.velocity_from_vorticity(omega)
    stack = lagrangian.build_stack(v, omega, s_max_lagrangian)
    lag = stack.norm_sequence()
    et = eulerian.et_coefficients(omega, s_max_eulerian).norm_sequence()
    return {
        "lagrangian_norms": lag,
        "eulerian_norms": et,
        "lagrangian_transition": detect_transition(lag, decades=decades),
        "eulerian_transition": detect_transition(et, decades=decades),
    }


def pointwise_hadamard_minimum(stack, dt_grid_stride=8):
    """Grid-sampled finite-order Cauchy-Hadamard radius estimate, minimised.

    Consistency probe for the L2-series radius: on a coarse subsample of
    grid points, 1/R(a) is estimated as max over the tail of
    |xi^(s)(a)|^(1/s); the minimum over the sample is returned.
    """
    n = stack.n
    sel = slice(0, n, dt_grid_stride)
    mags = []
    for s in range(1, stack.order + 1):
        g = spectral.inverse(stack.coeffs[s], check=False)
        mags.append(np.sqrt(g[0][sel, sel] ** 2 + g[1][sel, sel] ** 2))
    mags = np.asarray(mags)
    orders = np.arange(1, stack.order + 1)
    tail = orders >= max(2, stack.order // 2)
    with np.errstate(divide="ignore"):
        roots = mags[tail] ** (1.0 / orders[tail][:, None, None])
    inv_r = np.max(roots, axis=0)
    return float(1.0 / np.max(inv_r))
