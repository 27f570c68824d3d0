import json

import numpy as np
import pytest

from liouvint import cli


def run(args):
    return cli.main(args)


class TestCheckForm:
    def test_named_II_prints_euler_a_map(self, capsys):
        assert run(["check-form", "--family", "named", "--param", "II"]) == 0
        out = capsys.readouterr().out
        assert "rho(z, Z) = (Q, p)" in out
        assert "SingleFlowLine" in out
        assert "exceptional" in out  # euler A's consistency map degenerates

    def test_named_III_prints_euler_b_map(self, capsys):
        assert run(["check-form", "--family", "named", "--param", "III"]) == 0
        assert "rho(z, Z) = (q, P)" in capsys.readouterr().out

    def test_named_I_is_incompatible(self, capsys):
        assert run(["check-form", "--family", "named", "--param", "I"]) == 3
        assert "compatibility: FAILED" in capsys.readouterr().out

    def test_named_IV_is_incompatible(self):
        assert run(["check-form", "--family", "named", "--param", "IV"]) == 3

    def test_abg_midpoint_gives_zero_S(self, capsys):
        assert run(["check-form", "--family", "abg", "--param", "0.5,0,0"]) == 0
        out = capsys.readouterr().out
        assert "rho(z, Z) = (z + Z)/2" in out

    def test_emit_form_round_trip_bit_identical(self, tmp_path):
        f1 = tmp_path / "phi.json"
        f2 = tmp_path / "phi2.json"
        assert run(["check-form", "--family", "phi", "--param", "0.7231",
                    "--emit-form", str(f1)]) == 0
        assert run(["check-form", "--form", str(f1), "--emit-form", str(f2)]) == 0
        assert f1.read_bytes() == f2.read_bytes()
        R1 = np.asarray(json.loads(f1.read_text())["R"])
        R2 = np.asarray(json.loads(f2.read_text())["R"])
        assert np.array_equal(R1, R2)

    def test_corrupted_form_file_is_invalid(self, tmp_path):
        doc = {"n": 1, "R": np.zeros((4, 4)).tolist(), "label": "broken"}
        f = tmp_path / "bad.json"
        f.write_text(json.dumps(doc))
        assert run(["check-form", "--form", str(f)]) == 2

    def test_matrix_S_family_from_config(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps(
            {"family": "matrix-S", "S": [[0.0, 0.5], [0.5, 0.0]], "n": 1}))
        assert run(["check-form", "--config", str(cfg)]) == 0
        assert "rho(z, Z) = (Q, p)" in capsys.readouterr().out

    def test_asymmetric_matrix_S_is_invalid(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps(
            {"family": "matrix-S", "S": [[0.0, 1.0], [0.0, 0.0]], "n": 1}))
        assert run(["check-form", "--config", str(cfg)]) == 2

    def test_from_symplectic_family(self, tmp_path, capsys):
        t = 0.5
        Psi = [[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]]
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"family": "from-symplectic", "Psi": Psi, "n": 1}))
        assert run(["check-form", "--config", str(cfg)]) == 0
        assert "psi symplectic residual" in capsys.readouterr().out


class TestIntegrate:
    def test_pendulum_midpoint_row_count(self, tmp_path):
        out = tmp_path / "traj.csv"
        assert run(["integrate", "--system", "pendulum", "--family", "preset",
                    "--param", "midpoint", "--h", "0.05", "--steps", "1000",
                    "--z0", "0.8,0.3", "--out", str(out), "--no-plot"]) == 0
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 1002  # header + 1001 states
        assert lines[0] == "step,t,q1,p1,H,iters"
        # column count = 2 + 2n + 2
        assert len(lines[1].split(",")) == 6

    def test_figures_rendered_alongside_csv(self, tmp_path):
        out = tmp_path / "traj.csv"
        assert run(["integrate", "--system", "harmonic", "--family", "named",
                    "--param", "II", "--h", "0.01", "--steps", "50",
                    "--z0", "1,0", "--out", str(out)]) == 0
        assert (tmp_path / "traj_energy.png").exists()
        assert (tmp_path / "traj_phase.png").exists()

    def test_drift_reported(self, capsys, tmp_path):
        out = tmp_path / "traj.csv"
        assert run(["integrate", "--system", "harmonic", "--family", "preset",
                    "--param", "euler_a", "--h", "0.01", "--steps", "500",
                    "--z0", "1,0", "--out", str(out), "--no-plot"]) == 0
        text = capsys.readouterr().out
        assert "max energy drift" in text

    def test_bad_param_arity_is_usage_error(self):
        assert run(["integrate", "--system", "pendulum", "--family", "abg",
                    "--param", "0.5,0", "--h", "0.05", "--steps", "10",
                    "--z0", "0.8,0.3"]) == 1

    def test_solver_failure_writes_partial_and_exits_4(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({
            "system": "pendulum", "family": "preset", "param": "midpoint",
            "h": 0.3, "steps": 5, "z0": [0.8, 0.3], "max_iter": 1,
            "out": str(tmp_path / "partial.csv")}))
        assert run(["integrate", "--config", str(cfg), "--no-plot"]) == 4
        assert "PARTIAL" in capsys.readouterr().out
        assert (tmp_path / "partial.csv").exists()

    def test_deterministic_output_files(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["integrate", "--system", "pendulum", "--family", "phi",
                "--param", "0.4", "--h", "0.02", "--steps", "100",
                "--z0", "0.8,0.3", "--no-plot"]
        assert run(args + ["--out", str(a)]) == 0
        assert run(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_kepler_orbit(self, tmp_path):
        out = tmp_path / "kepler.csv"
        assert run(["integrate", "--system", "kepler", "--family", "preset",
                    "--param", "midpoint", "--h", "0.02", "--steps", "200",
                    "--z0", "1,0,0,1.2", "--out", str(out), "--no-plot"]) == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "step,t,q1,q2,p1,p2,H,iters"
        assert len(lines[1].split(",")) == 8


class TestVerify:
    def test_midpoint_harmonic_all_pass(self, tmp_path, capsys):
        out = tmp_path / "verify.csv"
        assert run(["verify", "--system", "harmonic", "--family", "preset",
                    "--param", "midpoint", "--h", "0.1", "--steps", "200",
                    "--z0", "1,0", "--out", str(out), "--assert",
                    "--no-plot"]) == 0
        text = capsys.readouterr().out
        assert "FAIL" not in text
        assert out.exists()

    def test_report_figure_rendered(self, tmp_path):
        out = tmp_path / "verify.csv"
        assert run(["verify", "--system", "pendulum", "--family", "phi",
                    "--param", "0.3", "--h", "0.01", "--steps", "50",
                    "--z0", "0.8,0.3", "--out", str(out)]) == 0
        assert (tmp_path / "verify_residuals.png").exists()


class TestSweep:
    def test_phi_grid_assert_passes(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert run(["sweep", "--system", "pendulum", "--family", "phi",
                    "--param", "0,0.3927,0.7854,1.1781,1.5708",
                    "--h", "0.01", "--z0", "0.8,0.3", "--out", str(out),
                    "--assert", "--no-plot"]) == 0
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 6

    def test_random_S_sweep_with_seed(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({
            "system": "linear-random", "n": 2, "family": "random-S",
            "count": 3, "h": 0.01, "z0": [0.7, -0.3, 0.2, 0.5]}))
        assert run(["sweep", "--config", str(cfg), "--seed", "7",
                    "--no-plot"]) == 0
        assert "3/3" in capsys.readouterr().out


class TestCayley:
    def test_hamiltonian_input(self, tmp_path, capsys):
        f = tmp_path / "m.json"
        f.write_text(json.dumps({"M": [[0.0, -1.0], [1.0, 0.0]]}))
        assert run(["cayley", str(f)]) == 0
        text = capsys.readouterr().out
        assert "hamiltonian=True" in text
        assert "symplectic=True" in text.splitlines()[-2]  # output predicates

    def test_exceptional_exits_3(self, tmp_path):
        f = tmp_path / "m.json"
        f.write_text(json.dumps([[-1.0, 0.0], [0.0, -1.0]]))
        assert run(["cayley", str(f)]) == 3


class TestUsage:
    def test_unknown_family_is_usage_error(self):
        assert run(["check-form", "--family", "fourier", "--param", "1"]) == 1

    def test_missing_system_is_usage_error(self):
        assert run(["integrate", "--family", "preset", "--param", "midpoint",
                    "--h", "0.1", "--steps", "5", "--z0", "1,0"]) == 1

    def test_unknown_subcommand_exits_1(self):
        with pytest.raises(SystemExit) as err:
            run(["frobnicate"])
        assert err.value.code == 1
