"""Fourier-space backbone on the 2pi-periodic square.

Conventions
-----------
Grid fields are real float64 arrays of shape (n, n) sampled at
a_i = 2*pi*i/n, b_j = 2*pi*j/n with array index [i, j].  Vector fields
stack components along a leading axis, shape (2, n, n).

Spectral fields are complex128 arrays in numpy fft2 layout (full complex
lattice, both signs of k).  The forward transform carries 1/n^2 so that
coefficients are Fourier-series coefficients: coeff(0, 0) is the spatial
mean and cos(a) has coefficients 1/2 at k = (+-1, 0).
"""

import numpy as np

from .errors import ArityError, NonzeroMeanError, SymmetryError

HERMITIAN_TOL = 1e-12


def grid_coordinates(n):
    """Return (a, b) meshgrids of shape (n, n), 'ij' indexing."""
    x = 2.0 * np.pi * np.arange(n) / n
    return np.meshgrid(x, x, indexing="ij")


def wavenumbers(n):
    """Signed integer wavenumbers in fft layout."""
    return np.fft.fftfreq(n, 1.0 / n).astype(np.int64)


def wavegrid(n):
    """Meshgrids (k1, k2) of shape (n, n) matching the spectral layout."""
    k = wavenumbers(n)
    return np.meshgrid(k, k, indexing="ij")


def dealias_cutoff(n):
    """2/3-rule cutoff: modes with |k1| > n//3 or |k2| > n//3 are dropped."""
    return n // 3


def forward(g):
    """Discrete Fourier transform; coeff(0) equals the spatial mean."""
    n = g.shape[-1]
    return np.fft.fft2(g) / (n * n)


def _hermitian_defect(s):
    flipped = np.conj(np.roll(s[..., ::-1, ::-1], shift=(1, 1), axis=(-2, -1)))
    return np.max(np.abs(s - flipped))


def is_hermitian(s, tol=HERMITIAN_TOL):
    scale = max(np.max(np.abs(s)), 1.0)
    return _hermitian_defect(s) <= tol * scale


def inverse(s, check=True):
    """Inverse transform to a real grid field.

    Raises SymmetryError when the input is not Hermitian-symmetric, since
    the represented field would not be real.
    """
    if check and not is_hermitian(s):
        raise SymmetryError("spectral field is not Hermitian-symmetric")
    n = s.shape[-1]
    return np.real(np.fft.ifft2(s * (n * n)))


def dealias_mask(n):
    k1, k2 = wavegrid(n)
    kc = dealias_cutoff(n)
    return (np.abs(k1) <= kc) & (np.abs(k2) <= kc)


def dealias(s):
    """Zero modes beyond the square 2/3-rule cutoff (idempotent projection)."""
    return s * dealias_mask(s.shape[-1])


def gradient(s):
    """Spectral gradient of a scalar field; returns a (2, n, n) vector."""
    if s.ndim != 2:
        raise ArityError("gradient expects a scalar spectral field")
    k1, k2 = wavegrid(s.shape[-1])
    return np.stack([1j * k1 * s, 1j * k2 * s])


def inverse_laplacian(s):
    """Multiplier -1/|k|^2; the k=0 mode is zeroed (zero-mean convention)."""
    k1, k2 = wavegrid(s.shape[-1])
    k2norm = (k1 * k1 + k2 * k2).astype(np.float64)
    k2norm[0, 0] = 1.0
    out = -s / k2norm
    out[..., 0, 0] = 0.0
    return out


def calderon_zygmund(s, i, j):
    """Bounded multiplier operator k_i k_j / |k|^2 (zero at k=0)."""
    if s.ndim != 2:
        raise ArityError("calderon_zygmund expects a scalar spectral field")
    k = wavegrid(s.shape[-1])
    k2norm = (k[0] * k[0] + k[1] * k[1]).astype(np.float64)
    k2norm[0, 0] = 1.0
    out = s * (k[i] * k[j]) / k2norm
    out[0, 0] = 0.0
    return out


def velocity_from_vorticity(omega, mean_tol=1e-13):
    """Divergence-free velocity with curl(v) = omega.

    v = (-d/db, d/da) psi with psi the zero-mean solution of lap(psi) = omega.
    """
    if omega.ndim != 2:
        raise ArityError("vorticity must be scalar")
    scale = max(np.max(np.abs(omega)), 1.0)
    if np.abs(omega[0, 0]) > mean_tol * scale:
        raise NonzeroMeanError("mean vorticity must vanish on the torus")
    psi = inverse_laplacian(omega)
    k1, k2 = wavegrid(omega.shape[-1])
    return np.stack([-1j * k2 * psi, 1j * k1 * psi])


def curl(v):
    """z-component of the curl of a spectral vector field."""
    k1, k2 = wavegrid(v.shape[-1])
    return 1j * k1 * v[1] - 1j * k2 * v[0]


def divergence(v):
    k1, k2 = wavegrid(v.shape[-1])
    return 1j * k1 * v[0] + 1j * k2 * v[1]


def norm_l2(s):
    """Parseval L2 norm: sqrt(sum_k |coeff|^2), components summed for vectors."""
    return float(np.sqrt(np.sum(np.abs(s) ** 2)))


def grid_norm_l2(g):
    """Grid-space L2 norm, normalised to match norm_l2 via Parseval.

    For vector fields the component norms are summed in quadrature.
    """
    g = np.asarray(g)
    return float(np.sqrt(np.sum(np.mean(g * g, axis=(-2, -1)))))
