"""Reference Eulerian integrators for the 2D vorticity equation.

d omega/dt + (v . grad) omega = 0 with curl(v) = omega, advanced by
explicit midpoint (RK2), classical RK4, or the Eulerian time-Taylor
series (ET-S).  Products are formed pseudospectrally and dealiased.
"""

from dataclasses import dataclass

import numpy as np

from . import spectral
from .errors import NumericalError


@dataclass
class EulerianState:
    omega: np.ndarray  # spectral, dealiased, zero mean
    t: float


@dataclass
class EtStack:
    """Vorticity Taylor coefficients omega_0..omega_S around one instant."""

    coeffs: list
    norms: list

    @property
    def order(self):
        return len(self.coeffs) - 1

    def norm_sequence(self):
        """Norms of omega_1..omega_S (s-indexed from 1, as for displacements)."""
        return np.asarray(self.norms[1:], dtype=np.float64)


def _advection(v_grid, omega):
    """dealias(F[(v . grad) omega]) with v given on the grid."""
    grad = spectral.inverse(spectral.gradient(omega), check=False)
    prod = v_grid[0] * grad[0] + v_grid[1] * grad[1]
    out = spectral.dealias(spectral.forward(prod))
    # mean of v.grad(omega) vanishes analytically; drop the rounding residue
    out[0, 0] = 0.0
    return out


def rhs(omega):
    """Right-hand side -(v . grad) omega of the vorticity equation."""
    v = spectral.inverse(spectral.velocity_from_vorticity(omega), check=False)
    out = -_advection(v, omega)
    if not np.all(np.isfinite(out.view(np.float64))):
        raise NumericalError("non-finite advection term")
    return out


def _check(omega):
    if not np.all(np.isfinite(omega.view(np.float64))):
        raise NumericalError("numerical overflow in Eulerian step")
    return omega


def rk2_step(state, dt):
    """Explicit midpoint step."""
    k1 = rhs(state.omega)
    k2 = rhs(spectral.dealias(state.omega + 0.5 * dt * k1))
    return EulerianState(_check(spectral.dealias(state.omega + dt * k2)), state.t + dt)


def rk4_step(state, dt):
    """Classical fourth-order Runge-Kutta step."""
    w = state.omega
    k1 = rhs(w)
    k2 = rhs(spectral.dealias(w + 0.5 * dt * k1))
    k3 = rhs(spectral.dealias(w + 0.5 * dt * k2))
    k4 = rhs(spectral.dealias(w + dt * k3))
    out = spectral.dealias(w + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
    return EulerianState(_check(out), state.t + dt)


def et_coefficients(omega0, order):
    """Taylor coefficients from (s+1) w_{s+1} = -sum_m (v_m . grad) w_{s-m}."""
    coeffs = [np.array(omega0)]
    v_grids = [spectral.inverse(spectral.velocity_from_vorticity(omega0), check=False)]
    grad_grids = [spectral.inverse(spectral.gradient(omega0), check=False)]
    norms = [spectral.norm_l2(omega0)]
    for s in range(order):
        acc = np.zeros_like(omega0.real)
        for m in range(s + 1):
            g = grad_grids[s - m]
            acc += v_grids[m][0] * g[0] + v_grids[m][1] * g[1]
        w_next = -spectral.dealias(spectral.forward(acc)) / (s + 1)
        w_next[0, 0] = 0.0
        if not np.all(np.isfinite(w_next.view(np.float64))):
            raise NumericalError(f"non-finite ET coefficient at order {s + 1}", order=s + 1)
        coeffs.append(w_next)
        norms.append(spectral.norm_l2(w_next))
        v_grids.append(
            spectral.inverse(spectral.velocity_from_vorticity(w_next), check=False)
        )
        grad_grids.append(spectral.inverse(spectral.gradient(w_next), check=False))
    return EtStack(coeffs=coeffs, norms=norms)


def et_step(state, dt, order):
    """Advance by summing the truncated vorticity Taylor series (Horner)."""
    stack = et_coefficients(state.omega, order)
    acc = np.array(stack.coeffs[order])
    for s in range(order - 1, -1, -1):
        acc = acc * dt + stack.coeffs[s]
    return EulerianState(_check(spectral.dealias(acc)), state.t + dt)


def max_speed(omega):
    v = spectral.inverse(spectral.velocity_from_vorticity(omega), check=False)
    return float(np.max(np.sqrt(v[0] ** 2 + v[1] ** 2)))


def courant_number(omega, dt):
    """Co = k_max * U_max * dt with k_max the dealias cutoff."""
    return spectral.dealias_cutoff(omega.shape[-1]) * max_speed(omega) * dt
