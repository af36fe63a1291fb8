"""Initial conditions, the run loop, run comparison, and the CLI."""

import os

import numpy as np
import pytest

from euler2d import cli, diagnostics, eulerian, io, runner, spectral
from euler2d.errors import ConfigError


class TestInitialConditions:
    def test_four_mode_grid_values(self):
        a, b = spectral.grid_coordinates(64)
        want = np.cos(a) + np.cos(b) + 0.6 * np.cos(2 * a) + 0.2 * np.cos(3 * a)
        got = spectral.inverse(runner.make_four_mode(64))
        assert np.max(np.abs(got - want)) < 1e-14
        assert np.max(np.abs(got)) == pytest.approx(2.8, abs=1e-12)

    def test_ab_flow_grid_values(self):
        a, b = spectral.grid_coordinates(64)
        omega = runner.make_ab_flow(64)
        got = spectral.inverse(omega)
        assert np.max(np.abs(got - np.sin(a) * np.cos(b))) < 1e-15
        assert abs(omega[0, 0]) == 0.0
        assert np.max(np.abs(eulerian.rhs(omega))) < 1e-15

    def test_random_flow_shell_modulus(self):
        n = 64
        s = runner.make_random_flow(n, seed=5)
        # brute-force lattice count of the K=2 shell
        count = 0
        for k1 in range(-21, 22):
            for k2 in range(-21, 22):
                if 2.0 <= np.hypot(k1, k2) < 3.0:
                    count += 1
        want = 2.0 * 2.0**3.5 * np.exp(-1.0) / count
        for k1, k2 in ((2, 0), (2, 1), (-2, -2), (1, 2)):
            assert abs(s[k1 % n, k2 % n]) == pytest.approx(want, rel=1e-13)

    def test_random_flow_is_real(self):
        s = runner.make_random_flow(64, seed=6)
        g = np.fft.ifft2(s * 64 * 64)
        assert np.max(np.abs(np.imag(g))) < 1e-13

    def test_random_flow_deterministic(self):
        a = runner.make_random_flow(64, seed=7)
        b = runner.make_random_flow(64, seed=7)
        np.testing.assert_array_equal(a, b)
        c = runner.make_random_flow(64, seed=8)
        assert np.max(np.abs(a - c)) > 0.0

    def test_file_initial(self, tmp_path):
        g = spectral.inverse(runner.make_four_mode(48))
        path = tmp_path / "ic.field"
        io.write_field(path, g, 0.0)
        config = runner.RunConfig(initial="file", initial_path=str(path), n=48)
        omega = runner.initial_vorticity(config)
        np.testing.assert_allclose(omega, runner.make_four_mode(48), atol=1e-15)

    def test_file_initial_shape_mismatch(self, tmp_path):
        path = tmp_path / "ic.field"
        io.write_field(path, np.zeros((32, 32)), 0.0)
        config = runner.RunConfig(initial="file", initial_path=str(path), n=48)
        with pytest.raises(ConfigError):
            runner.initial_vorticity(config)


class TestConfigValidation:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"method": "XX"},
            {"initial": "vortex"},
            {"n": 8},
            {"epsilon": 0.0},
            {"t_end": -1.0},
            {"method": "RK4", "dt": None},
            {"initial": "file"},
        ],
    )
    def test_rejected(self, kwargs):
        with pytest.raises(ConfigError):
            runner.RunConfig(**kwargs).validate()


class TestRunLoop:
    def test_zero_time_is_identity(self):
        config = runner.RunConfig(method="CL", n=64, t_end=0.0)
        art = runner.run(config)
        np.testing.assert_array_equal(art.omega, runner.initial_vorticity(config))
        assert art.steps == []

    def test_cl_step_records(self):
        config = runner.RunConfig(method="CL", order=8, n=64, t_end=0.3)
        art = runner.run(config)
        assert art.t == pytest.approx(0.3, abs=1e-12)
        for rec in art.steps:
            assert rec["truncation_term"] < config.epsilon
            assert rec["jacobian_min"] > 0.0
            assert rec["rejections"] == 0

    def test_eulerian_step_count(self):
        config = runner.RunConfig(method="RK4", dt=0.05, n=64, t_end=0.5)
        art = runner.run(config)
        assert len(art.steps) == 10
        assert art.t == pytest.approx(0.5)

    def test_output_directory_contents(self, tmp_path):
        out = tmp_path / "run"
        config = runner.RunConfig(
            method="CL", order=8, n=64, t_end=0.3,
            output_cadence=1, radius_cadence=2, radius_depth=25,
            checkpoint_cadence=1,
        )
        runner.run(config, output_dir=str(out))
        assert (out / "config.txt").exists()
        assert (out / "conservation.csv").exists()
        assert (out / "steps.csv").exists()
        assert (out / "radius.csv").exists()
        assert (out / "checkpoint.field").exists()
        fields = sorted(os.listdir(out / "fields"))
        assert fields[0] == "omega_000000.field"
        assert len(fields) >= 2
        norms = [f for f in os.listdir(out) if f.startswith("norms_")]
        assert norms

    def test_compare_self_is_zero(self):
        config = runner.RunConfig(method="RK4", dt=0.05, n=64, t_end=0.2,
                                  output_cadence=2)
        art = runner.run(config)
        rows = runner.compare(art, art)
        assert rows[-1][-1] == 0.0

    def test_compare_resolution_mismatch(self):
        a = runner.run(runner.RunConfig(method="CL", n=64, t_end=0.0))
        b = runner.run(runner.RunConfig(method="CL", n=48, t_end=0.0))
        with pytest.raises(ConfigError):
            runner.compare(a, b)

    def test_compare_dirs(self, tmp_path):
        config = runner.RunConfig(method="RK4", dt=0.05, n=64, t_end=0.2,
                                  output_cadence=2)
        runner.run(config, output_dir=str(tmp_path / "a"))
        runner.run(config, output_dir=str(tmp_path / "b"))
        header, rows = runner.compare_dirs(
            str(tmp_path / "a"), str(tmp_path / "b"), str(tmp_path / "d.csv")
        )
        assert header[0] == "t"
        assert all(row[1] == 0.0 for row in rows)
        assert (tmp_path / "d.csv").exists()


class TestCli:
    def test_run_and_spectrum(self, tmp_path):
        out = str(tmp_path / "run")
        code = cli.main([
            "run", "--method", "RK4", "--dt", "0.05", "--n", "64",
            "--t-end", "0.2", "--output-cadence", "2", "--output-dir", out,
        ])
        assert code == 0
        field = os.path.join(out, "fields", "omega_000000.field")
        code = cli.main(["spectrum", field, "--output-dir", str(tmp_path / "sp")])
        assert code == 0
        header, rows = io.read_csv(str(tmp_path / "sp" / "spectrum.csv"))
        assert header == ["K", "E_omega"]
        assert len(rows) > 3

    def test_compare_command(self, tmp_path):
        args = ["run", "--method", "RK4", "--dt", "0.05", "--n", "64",
                "--t-end", "0.2", "--output-cadence", "2"]
        assert cli.main(args + ["--output-dir", str(tmp_path / "a")]) == 0
        assert cli.main(args + ["--output-dir", str(tmp_path / "b")]) == 0
        code = cli.main([
            "compare", str(tmp_path / "a"), str(tmp_path / "b"),
            "--output-dir", str(tmp_path / "cmp"),
        ])
        assert code == 0
        assert (tmp_path / "cmp" / "discrepancy.csv").exists()

    def test_radius_command(self, tmp_path):
        out = str(tmp_path / "run")
        code = cli.main([
            "run", "--method", "CL", "--n", "64", "--t-end", "0.1",
            "--radius-cadence", "1", "--radius-depth", "30",
            "--output-dir", out,
        ])
        assert code == 0
        norms_csv = os.path.join(out, "norms_000000.csv")
        assert cli.main(["radius", norms_csv, "--s-min", "8"]) == 0

    def test_config_error_exit_code(self, tmp_path):
        code = cli.main([
            "run", "--method", "RK4", "--t-end", "1.0",
            "--output-dir", str(tmp_path / "x"),
        ])  # RK4 without dt
        assert code == 2

    def test_missing_file_exit_code(self, tmp_path):
        code = cli.main([
            "spectrum", str(tmp_path / "nope.field"),
            "--output-dir", str(tmp_path / "sp"),
        ])
        assert code == 2


def test_radius_probe_reports_fit():
    report, norms = runner.radius_probe(runner.make_four_mode(128), depth=30, s_min=8)
    assert report is not None
    assert len(norms) == 30
    assert 0.8 < report.radius < 1.6
