"""Experiment orchestration: initial conditions, the multistep loop, I/O.

One Lagrangian step: build the displacement Taylor stack, pick dt from the
truncation criterion (norms[S] * dt^S < epsilon, capped by R*e^-2 once a
radius estimate exists), evaluate the truncated series, check
monotonicity, revert the vorticity by cascade interpolation, restart from
the new Eulerian field.  Eulerian methods march with a fixed dt.
"""

import os
from dataclasses import dataclass, field as dc_field, asdict

import numpy as np

from . import diagnostics, eulerian, interpolation, io, lagrangian, spectral
from .errors import ConfigError, InsufficientDataError, NumericalError, ReversionError

METHODS = ("CL", "RK2", "RK4", "ET")
INITIALS = ("four_mode", "random", "ab", "file")

MAX_REJECTIONS = 5


@dataclass
class RunConfig:
    method: str = "CL"
    order: int = 8
    n: int = 256
    epsilon: float = 1e-12
    dt: float | None = None  # fixed step (RK/ET) or cap (CL)
    t_end: float = 1.0
    initial: str = "four_mode"
    seed: int = 0
    initial_path: str | None = None
    auto_order: bool = False
    output_cadence: int = 10
    radius_cadence: int = 10
    radius_depth: int = 40
    checkpoint_cadence: int = 0

    def validate(self):
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}")
        if self.initial not in INITIALS:
            raise ConfigError(f"unknown initial condition {self.initial!r}")
        if self.n < 16:
            raise ConfigError("resolution must be at least 16")
        if self.epsilon <= 0.0:
            raise ConfigError("epsilon must be positive")
        if self.t_end < 0.0:
            raise ConfigError("t_end must be nonnegative")
        if self.method in ("RK2", "RK4", "ET") and self.t_end > 0 and not self.dt:
            raise ConfigError(f"{self.method} requires a fixed dt")
        if self.initial == "file" and not self.initial_path:
            raise ConfigError("initial=file requires initial_path")


@dataclass
class RunArtifacts:
    config: RunConfig
    omega: np.ndarray  # final spectral vorticity
    t: float
    steps: list = dc_field(default_factory=list)
    conservation: list = dc_field(default_factory=list)  # (step, t, E, Z)
    radius_series: list = dc_field(default_factory=list)  # (step, t, radius)
    field_times: list = dc_field(default_factory=list)
    output_dir: str | None = None


def make_four_mode(n):
    """cos a + cos b + 0.6 cos 2a + 0.2 cos 3a, as exact spectral modes."""
    if n < 8:
        raise ConfigError("four-mode flow needs n >= 8")
    s = np.zeros((n, n), dtype=np.complex128)
    for k, amp in ((1, 1.0), (2, 0.6), (3, 0.2)):
        s[k, 0] = amp / 2.0
        s[-k, 0] = amp / 2.0
    s[0, 1] = 0.5
    s[0, -1] = 0.5
    return s


def make_ab_flow(n):
    """sin a cos b: steady vorticity of the 2D Euler equation."""
    s = np.zeros((n, n), dtype=np.complex128)
    quarter = 0.25
    s[1, 1] = -1j * quarter
    s[1, -1] = -1j * quarter
    s[-1, 1] = 1j * quarter
    s[-1, -1] = 1j * quarter
    return s


def shell_members(n, shell):
    """Lattice wavevectors with shell <= |k| < shell+1 inside the dealias square."""
    kc = spectral.dealias_cutoff(n)
    members = []
    for k1 in range(-kc, kc + 1):
        for k2 in range(-kc, kc + 1):
            r = np.hypot(k1, k2)
            if shell <= r < shell + 1 and (k1, k2) != (0, 0):
                members.append((k1, k2))
    return members


def make_random_flow(n, seed, modulus_floor=1e-18):
    """Shell-prescribed moduli 2 K^(7/2) e^(-K^2/4) / N(K), random phases.

    Phases are i.i.d. uniform on [0, 2pi) from a seeded PCG64 generator,
    drawn in a fixed lattice order; opposite wavevectors are conjugate so
    the field is real.
    """
    if n < 32:
        raise ConfigError("random flow needs n >= 32")
    rng = np.random.Generator(np.random.PCG64(seed))
    s = np.zeros((n, n), dtype=np.complex128)
    kc = spectral.dealias_cutoff(n)
    shell_counts = {}
    for shell in range(1, kc + 2):
        shell_counts[shell] = len(shell_members(n, shell))
    # fixed half-lattice traversal (k1 > 0, or k1 == 0 and k2 > 0)
    for k1 in range(0, kc + 1):
        for k2 in range(-kc, kc + 1):
            if k1 == 0 and k2 <= 0:
                continue
            shell = int(np.floor(np.hypot(k1, k2)))
            if shell < 1 or shell > kc:
                continue
            count = shell_counts.get(shell, 0)
            if count == 0:
                continue
            modulus = 2.0 * shell**3.5 * np.exp(-(shell**2) / 4.0) / count
            phase = rng.uniform(0.0, 2.0 * np.pi)
            if modulus < modulus_floor:
                continue
            value = modulus * np.exp(1j * phase)
            s[k1 % n, k2 % n] = value
            s[(-k1) % n, (-k2) % n] = np.conj(value)
    return s


def initial_vorticity(config):
    if config.initial == "four_mode":
        omega = make_four_mode(config.n)
    elif config.initial == "ab":
        omega = make_ab_flow(config.n)
    elif config.initial == "random":
        omega = make_random_flow(config.n, config.seed)
    else:
        values, _ = io.read_field(config.initial_path)
        if values.shape != (config.n, config.n):
            raise ConfigError(
                f"initial field shape {values.shape} does not match n={config.n}"
            )
        omega = spectral.forward(values)
    omega = spectral.dealias(omega)
    omega[0, 0] = 0.0
    return omega


def radius_probe(omega, depth=40, s_min=10):
    """Fit the L2-norm series of a deep displacement stack; returns
    (FitReport or None, norm sequence)."""
    v = spectral.velocity_from_vorticity(omega)
    stack = lagrangian.build_stack(v, omega, depth)
    norms = stack.norm_sequence()
    transition = diagnostics.detect_transition(norms)
    s_max = len(norms) if transition is None else max(transition - 5, s_min + 4)
    try:
        report = diagnostics.fit_log_linear(norms, (s_min, s_max))
    except (InsufficientDataError, ValueError):
        return None, norms
    return report, norms


class _OutputWriter:
    """Accumulates run outputs and flushes files under the output directory."""

    def __init__(self, config, output_dir):
        self.config = config
        self.dir = output_dir
        if output_dir is not None:
            os.makedirs(output_dir, exist_ok=True)
            os.makedirs(os.path.join(output_dir, "fields"), exist_ok=True)
            io.write_config(
                os.path.join(output_dir, "config.txt"),
                {k: v for k, v in asdict(config).items() if v is not None},
            )

    def field(self, step, omega, t):
        if self.dir is None:
            return
        path = os.path.join(self.dir, "fields", f"omega_{step:06d}.field")
        io.write_field(path, spectral.inverse(omega, check=False), t)

    def spectrum(self, step, omega, t):
        if self.dir is None:
            return
        shells = diagnostics.vorticity_spectrum(omega).shells
        path = os.path.join(self.dir, f"spectrum_{step:06d}.csv")
        io.write_csv(path, ["K", "E_omega"], list(enumerate(shells)))

    def norms(self, step, t, norms):
        if self.dir is None:
            return
        path = os.path.join(self.dir, f"norms_{step:06d}.csv")
        io.write_csv(path, ["s", "norm"], list(zip(range(1, len(norms) + 1), norms)))

    def checkpoint(self, omega, t):
        if self.dir is None:
            return
        io.write_field(
            os.path.join(self.dir, "checkpoint.field"),
            spectral.inverse(omega, check=False),
            t,
        )

    def finish(self, artifacts):
        if self.dir is None:
            return
        io.write_csv(
            os.path.join(self.dir, "conservation.csv"),
            ["step", "t", "energy", "enstrophy"],
            artifacts.conservation,
        )
        io.write_csv(
            os.path.join(self.dir, "radius.csv"),
            ["step", "t", "radius"],
            artifacts.radius_series,
        )
        if artifacts.steps:
            keys = list(artifacts.steps[0].keys())
            io.write_csv(
                os.path.join(self.dir, "steps.csv"),
                keys,
                [[rec[k] for k in keys] for rec in artifacts.steps],
            )


def run(config, output_dir=None):
    """Execute a run and return its artifacts (writing files when asked)."""
    config.validate()
    omega = initial_vorticity(config)
    writer = _OutputWriter(config, output_dir)
    artifacts = RunArtifacts(config=config, omega=omega, t=0.0, output_dir=output_dir)

    def record_diagnostics(step, omega, t):
        artifacts.conservation.append(
            (step, t, diagnostics.energy(omega), diagnostics.enstrophy(omega))
        )
        writer.field(step, omega, t)
        writer.spectrum(step, omega, t)
        artifacts.field_times.append(t)

    record_diagnostics(0, omega, 0.0)

    if config.method == "CL":
        omega, t = _run_cl(config, omega, artifacts, writer, record_diagnostics)
    else:
        omega, t = _run_eulerian(config, omega, artifacts, writer, record_diagnostics)

    if artifacts.field_times[-1] != t:
        record_diagnostics(len(artifacts.steps), omega, t)
    artifacts.omega = omega
    artifacts.t = t
    writer.finish(artifacts)
    return artifacts


def _run_cl(config, omega, artifacts, writer, record_diagnostics):
    t = 0.0
    step = 0
    r_estimate = None
    while t < config.t_end - 1e-12:
        if config.radius_cadence and step % config.radius_cadence == 0:
            report, norms = radius_probe(omega, config.radius_depth)
            writer.norms(step, t, norms)
            if report is not None:
                r_estimate = report.radius
                artifacts.radius_series.append((step, t, report.radius))

        v = spectral.velocity_from_vorticity(omega)
        if config.auto_order:
            amplitude = spectral.norm_l2(v)
            order, _ = lagrangian.step_order_controller(
                config.epsilon, r_estimate, amplitude
            )
        else:
            order = config.order
        stack = lagrangian.build_stack(v, omega, order)

        dt_cap = config.dt if config.dt else np.inf
        if r_estimate is not None:
            dt_cap = min(dt_cap, r_estimate * np.exp(-2.0))
        plan = lagrangian.choose_step(stack.norm_sequence(), config.epsilon, dt_cap)
        dt_raw = plan.dt
        dt = min(dt_raw, config.t_end - t)

        omega_grid = spectral.inverse(omega, check=False)
        rejections = 0
        while True:
            state = lagrangian.evaluate_displacement(stack, dt, omega_grid)
            try:
                reverted = interpolation.cascade_revert(state)
                break
            except ReversionError:
                rejections += 1
                if rejections > MAX_REJECTIONS:
                    raise
                dt *= 0.5

        jac = lagrangian.jacobian_determinant(stack, dt)
        new_omega = spectral.dealias(spectral.forward(reverted))
        new_omega[0, 0] = 0.0
        if not np.all(np.isfinite(new_omega.view(np.float64))):
            raise NumericalError(f"non-finite vorticity after step {step + 1}")
        omega = new_omega
        t += dt
        step += 1
        artifacts.steps.append(
            {
                "step": step,
                "t": t,
                "dt": dt,
                "dt_unclipped": dt_raw,
                "order": order,
                "truncation_term": stack.norms[order] * dt**order,
                "jacobian_min": float(np.min(jac)),
                "rejections": rejections,
            }
        )
        if config.output_cadence and step % config.output_cadence == 0:
            record_diagnostics(step, omega, t)
        if config.checkpoint_cadence and step % config.checkpoint_cadence == 0:
            writer.checkpoint(omega, t)
    return omega, t


def _run_eulerian(config, omega, artifacts, writer, record_diagnostics):
    stepper = {
        "RK2": lambda st, dt: eulerian.rk2_step(st, dt),
        "RK4": lambda st, dt: eulerian.rk4_step(st, dt),
        "ET": lambda st, dt: eulerian.et_step(st, dt, config.order),
    }[config.method]
    state = eulerian.EulerianState(omega, 0.0)
    step = 0
    while state.t < config.t_end - 1e-12:
        dt = min(config.dt, config.t_end - state.t)
        state = stepper(state, dt)
        step += 1
        artifacts.steps.append(
            {"step": step, "t": state.t, "dt": dt, "dt_unclipped": config.dt,
             "order": config.order, "truncation_term": 0.0,
             "jacobian_min": 1.0, "rejections": 0}
        )
        if config.output_cadence and step % config.output_cadence == 0:
            record_diagnostics(step, state.omega, state.t)
        if config.checkpoint_cadence and step % config.checkpoint_cadence == 0:
            writer.checkpoint(state.omega, state.t)
    return state.omega, state.t


def compare(artifacts_a, artifacts_b):
    """Discrepancy table between two runs at their common output times."""
    if artifacts_a.config.n != artifacts_b.config.n:
        raise ConfigError("resolution mismatch between runs")
    times_b = {round(t, 10): i for i, t in enumerate(artifacts_b.field_times)}
    common = [t for t in artifacts_a.field_times if round(t, 10) in times_b]
    if not common:
        raise ConfigError("no matching output times between runs")
    cons_a = {round(t, 10): (e, z) for _, t, e, z in artifacts_a.conservation}
    cons_b = {round(t, 10): (e, z) for _, t, e, z in artifacts_b.conservation}
    rows = []
    for t in common:
        key = round(t, 10)
        ea, za = cons_a[key]
        eb, zb = cons_b[key]
        rows.append([t, abs(ea - eb), abs(za - zb)])
    # field-level discrepancy only for the final common state held in memory
    if round(artifacts_a.t, 10) == round(artifacts_b.t, 10):
        ga = spectral.inverse(artifacts_a.omega, check=False)
        gb = spectral.inverse(artifacts_b.omega, check=False)
        rows[-1].append(diagnostics.max_discrepancy(ga, gb))
    return rows


def compare_dirs(dir_a, dir_b, out_path=None):
    """Per-time discrepancy CSV from two run output directories."""

    def load(d):
        fdir = os.path.join(d, "fields")
        out = {}
        for name in sorted(os.listdir(fdir)):
            values, t = io.read_field(os.path.join(fdir, name))
            out[round(t, 10)] = values
        return out

    fa = load(dir_a)
    fb = load(dir_b)
    common = sorted(set(fa) & set(fb))
    if not common:
        raise ConfigError("no matching output times between runs")
    rows = []
    for t in common:
        a, b = fa[t], fb[t]
        if a.shape != b.shape:
            raise ConfigError("resolution mismatch between runs")
        sa = spectral.forward(a)
        sb = spectral.forward(b)
        sa[0, 0] = 0.0
        sb[0, 0] = 0.0
        rows.append(
            [
                t,
                diagnostics.max_discrepancy(a, b),
                abs(diagnostics.energy(sa) - diagnostics.energy(sb)),
                abs(diagnostics.enstrophy(sa) - diagnostics.enstrophy(sb)),
            ]
        )
    header = ["t", "max_discrepancy", "energy_error", "enstrophy_error"]
    if out_path:
        io.write_csv(out_path, header, rows)
    return header, rows
