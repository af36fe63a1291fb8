"""High-order time-Taylor stepping of the Lagrangian displacement.

The displacement xi(a, t) = x(a, t) - a is expanded as sum_s xi^(s) t^s.
Coefficients follow from a recurrence that prescribes, in 2D,

  curl xi^(s) = delta_{s1} omega0
               - sum_{k=1,2} sum_{m=1}^{s-1} (m/s) [grad xi_k^(m) x grad xi_k^(s-m)]_z
  div  xi^(s) = - sum_{m=1}^{s-1} (d1 xi1^(m) d2 xi2^(s-m) - d2 xi1^(m) d1 xi2^(s-m))

solved by a Helmholtz decomposition xi = perp-grad(psi) + grad(phi) with
zero-mean psi, phi.  Quadratic products are formed pseudospectrally and
dealiased (2/3-rule).
"""

from dataclasses import dataclass, field

import numpy as np

from . import spectral
from .errors import CapacityError, NumericalError, StateError, StepTooLargeError


@dataclass
class TaylorStack:
    """Displacement Taylor coefficients xi^(1)..xi^(S) for one step.

    coeffs[s] is the spectral vector field of xi^(s) (1-based dict-like list:
    index 0 is unused).  grad_grids[s][k][j] caches d_j xi_k^(s) on the grid;
    the recurrence consumes only these gradients.
    """

    n: int
    coeffs: list = field(default_factory=lambda: [None])
    grad_grids: list = field(default_factory=lambda: [None])
    norms: list = field(default_factory=lambda: [None])

    @property
    def order(self):
        return len(self.coeffs) - 1

    def append(self, xi_spec):
        grads = np.stack(
            [spectral.inverse(spectral.gradient(xi_spec[k]), check=False) for k in (0, 1)]
        )
        self.coeffs.append(xi_spec)
        self.grad_grids.append(grads)
        self.norms.append(spectral.norm_l2(xi_spec))

    def norm_sequence(self):
        """Norms as an array indexed from s=1."""
        return np.asarray(self.norms[1:], dtype=np.float64)


@dataclass
class StepPlan:
    order: int
    dt: float
    epsilon: float
    r_estimate: float | None = None


@dataclass
class DistortedState:
    """End-of-step particle positions and the vorticity they carry.

    positions holds raw (unwrapped) coordinates a + xi_S(a, dt); in 2D the
    Lagrangian vorticity equals the step's initial vorticity samples.
    """

    positions: np.ndarray
    lagrangian_vorticity: np.ndarray
    velocity_at_arrival: np.ndarray
    dt: float


def next_coefficient(stack, omega_init, s, max_order=None):
    """Compute xi^(s) from coefficients 1..s-1 and the initial vorticity."""
    if max_order is not None and s > max_order:
        raise CapacityError(f"order {s} exceeds configured maximum {max_order}")
    if s != len(stack.coeffs):
        raise StateError(f"coefficients 1..{s - 1} must be present to build order {s}")
    n = stack.n
    if s == 1:
        psi = spectral.inverse_laplacian(omega_init)
        k1, k2 = spectral.wavegrid(n)
        return np.stack([-1j * k2 * psi, 1j * k1 * psi])

    curl_src = np.zeros((n, n))
    div_src = np.zeros((n, n))
    for m in range(1, s):
        gm = stack.grad_grids[m]
        gc = stack.grad_grids[s - m]
        w = m / s
        for k in (0, 1):
            curl_src -= w * (gm[k, 0] * gc[k, 1] - gm[k, 1] * gc[k, 0])
        div_src -= gm[0, 0] * gc[1, 1] - gm[0, 1] * gc[1, 0]

    curl_hat = spectral.dealias(spectral.forward(curl_src))
    div_hat = spectral.dealias(spectral.forward(div_src))
    psi = spectral.inverse_laplacian(curl_hat)
    phi = spectral.inverse_laplacian(div_hat)
    k1, k2 = spectral.wavegrid(n)
    return np.stack([-1j * k2 * psi + 1j * k1 * phi, 1j * k1 * psi + 1j * k2 * phi])


def build_stack(v_init, omega_init, order, max_order=None):
    """Populate a TaylorStack to the requested order.

    xi^(1) is taken directly as the initial velocity; higher coefficients
    come from the recurrence.  NaN in any coefficient aborts with the order.
    """
    n = v_init.shape[-1]
    stack = TaylorStack(n=n)
    stack.append(np.array(v_init))
    for s in range(2, order + 1):
        xi = next_coefficient(stack, omega_init, s, max_order=max_order)
        if not np.all(np.isfinite(xi.view(np.float64))):
            raise NumericalError(f"non-finite Taylor coefficient at order {s}", order=s)
        stack.append(xi)
    return stack


# Fractional shortfall keeping norms[S]*dt^S strictly below epsilon in floats.
_DT_SAFETY = 1.0 - 1e-9


def choose_step(norms, epsilon, dt_cap=np.inf):
    """Largest dt with norms[S]*dt^S < epsilon, capped at dt_cap.

    A zero top norm (rest state) makes the criterion vacuous; dt_cap is
    returned in that case.
    """
    if epsilon <= 0.0:
        raise ValueError("epsilon must be positive")
    norms = np.asarray(norms, dtype=np.float64)
    s_top = len(norms)
    top = norms[-1]
    if top == 0.0:
        if not np.isfinite(dt_cap):
            raise ValueError("all-zero norms with no dt cap")
        return StepPlan(order=s_top, dt=float(dt_cap), epsilon=epsilon)
    dt = (epsilon / top) ** (1.0 / s_top) * _DT_SAFETY
    return StepPlan(order=s_top, dt=float(min(dt, dt_cap)), epsilon=epsilon)


def evaluate_displacement(stack, dt, omega_init_grid):
    """Sum the truncated series at dt and return the distorted state.

    Horner evaluation from the highest order down; the arrival velocity is
    the term-wise time derivative of the same series.
    """
    coeffs = stack.coeffs
    s_top = stack.order
    if s_top < 1:
        raise StateError("stack is empty")
    xi_hat = np.array(coeffs[s_top])
    vel_hat = s_top * coeffs[s_top]
    for s in range(s_top - 1, 0, -1):
        xi_hat = xi_hat * dt + coeffs[s]
        vel_hat = vel_hat * dt + s * coeffs[s]
    xi_hat = xi_hat * dt

    xi = spectral.inverse(xi_hat, check=False)
    velocity = spectral.inverse(vel_hat, check=False)
    max_disp = np.max(np.abs(xi))
    if max_disp >= np.pi:
        raise StepTooLargeError(
            f"displacement max-norm {max_disp:.3f} exceeds half a period"
        )
    a1, a2 = spectral.grid_coordinates(stack.n)
    positions = np.stack([a1 + xi[0], a2 + xi[1]])
    return DistortedState(
        positions=positions,
        lagrangian_vorticity=np.array(omega_init_grid),
        velocity_at_arrival=velocity,
        dt=dt,
    )


def jacobian_determinant(stack, dt):
    """det(I + grad xi_S) on the grid; equals 1 to truncation error."""
    n = stack.n
    g = np.zeros((2, 2, n, n))
    for s in range(stack.order, 0, -1):
        g = g * dt + stack.grad_grids[s]
    g = g * dt
    return (1.0 + g[0, 0]) * (1.0 + g[1, 1]) - g[0, 1] * g[1, 0]


def step_order_controller(epsilon, r_estimate=None, amplitude=1.0, preset=None, d=2):
    """Pick the truncation order and an additional dt cap.

    With a preset (e.g. 8/16/24) the order is fixed.  In auto mode the order
    sits in the bracket [-(1/d) ln(eps/A), -ln(eps/A)]; the returned cap is
    R*e^-d once a radius estimate exists, else infinite (bootstrap: the
    truncation criterion alone governs the first steps).
    """
    if preset is not None:
        order = int(preset)
    else:
        a = max(amplitude, epsilon)
        lo = -np.log(epsilon / a) / d
        hi = -np.log(epsilon / a)
        # nonlinear-sum cost dominates at these resolutions: sit at the low end
        order = max(int(np.ceil(lo)), 2)
        order = int(np.clip(order, 2, np.ceil(hi)))
    dt_cap = np.inf if r_estimate is None else r_estimate * np.exp(-d)
    return order, dt_cap
