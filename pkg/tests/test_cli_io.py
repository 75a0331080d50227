import json
import math

import numpy as np
import pytest

from e2surf import catenoid, helicoid
from e2surf.cli import main
from e2surf.config import parse_config, parse_metric
from e2surf.errors import ConfigError
from e2surf.export import curve_text, export_curve, export_mesh, obj_text
from e2surf.grid import SurfaceGrid, sample_catenoid, sample_helicoid, thread_count
from e2surf.verify import run_verification


def write_json(path, data):
    path.write_text(json.dumps(data))
    return path


class TestConfig:
    def test_defaults_filled(self):
        cfg = parse_config(None, {"K": 0.5})
        assert cfg.family == "helicoid"
        assert (cfg.lambda1, cfg.lambda2) == (1.0, 1.0)
        assert cfg.grid.nu == 41 and cfg.tol.ode == 1e-12

    def test_order_violation(self):
        with pytest.raises(ConfigError) as exc:
            parse_config(None, {"K": 0.5, "lambda1": 1, "lambda2": 2})
        assert exc.value.field == "lambda1"
        with pytest.raises(ConfigError):
            parse_metric(None, {"lambda1": 1, "lambda2": 2})

    def test_flags_override_file(self, tmp_path):
        f = write_json(tmp_path / "c.json", {"family": "helicoid", "K": 0.3, "lambda1": 2,
                                             "grid": {"nu": 5}, "tol": {"ode": 1e-9}})
        cfg = parse_config(f, {"K": 0.7, "nv": 7})
        assert cfg.K == 0.7 and cfg.lambda1 == 2
        assert (cfg.grid.nu, cfg.grid.nv) == (5, 7)
        assert cfg.tol.ode == 1e-9

    def test_family_inferred_from_flag(self, tmp_path):
        f = write_json(tmp_path / "c.json", {"lambda1": 2})
        assert parse_config(f, {"c": 2.0}).family == "catenoid"

    @pytest.mark.parametrize("data,field", [
        ({"K": 1.0}, "K"),
        ({"K": 0.0}, "K"),
        ({"family": "helicoid"}, "K"),
        ({"family": "catenoid"}, "c"),
        ({"family": "catenoid", "c": -1}, "c"),
        ({"family": "torus", "K": 0.5}, "family"),
        ({"K": 0.5, "grid": {"nu": 1}}, "grid.nu"),
        ({"K": 0.5, "tol": {"ode": 0}}, "tol.ode"),
        ({"K": 0.5, "bogus": 1}, "bogus"),
        ({"K": 0.5, "c": 2.0, "family": "helicoid"}, "family"),
    ])
    def test_invalid(self, tmp_path, data, field):
        with pytest.raises(ConfigError) as exc:
            parse_config(write_json(tmp_path / "c.json", data))
        assert exc.value.field == field

    def test_bad_files(self, tmp_path):
        with pytest.raises(ConfigError):
            parse_config(tmp_path / "missing.json")
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        with pytest.raises(ConfigError):
            parse_config(bad)

    def test_hash_stable(self):
        a = parse_config(None, {"K": 0.5})
        b = parse_config(None, {"K": 0.5})
        c = parse_config(None, {"K": 0.6})
        assert a.config_hash() == b.config_hash() != c.config_hash()
        assert len(a.config_hash()) == 64


def _grid(positions):
    nu, nv, _ = positions.shape
    z = np.zeros((nu, nv))
    return SurfaceGrid(np.arange(nu, dtype=float), np.arange(nv, dtype=float), positions, z, z, z)


class TestObj:
    def test_two_by_two(self, tmp_path):
        pos = np.array([[[0, 0, 0], [0, 1, 0]], [[1, 0, 0], [1, 1, 0]]], dtype=float)
        path = tmp_path / "m.obj"
        export_mesh(_grid(pos), path)
        lines = path.read_text().splitlines()
        assert sum(l.startswith("v ") for l in lines) == 4
        faces = [l for l in lines if l.startswith("f ")]
        assert len(faces) == 2
        assert all(1 <= int(i) <= 4 for f in faces for i in f.split()[1:])

    def test_counts(self):
        text = obj_text(np.random.default_rng(0).normal(size=(5, 4, 3)))
        assert text.count("\nf ") == 2 * 4 * 3

    def test_round_trip_precision(self):
        pos = np.random.default_rng(1).normal(size=(3, 3, 3))
        vs = [l.split()[1:] for l in obj_text(pos).splitlines() if l.startswith("v ")]
        assert np.array_equal(np.array(vs, dtype=float), pos.reshape(-1, 3))

    def test_nan_guard(self):
        pos = np.zeros((2, 2, 3))
        pos[1, 1, 2] = np.nan
        with pytest.raises(ValueError):
            obj_text(pos)
        with pytest.raises(ValueError):
            _grid(pos)

    def test_grid_too_small(self):
        with pytest.raises(ValueError):
            _grid(np.zeros((1, 3, 3)))

    def test_helicoid_axis_row(self, tmp_path, flat_helicoid):
        grid = sample_helicoid(flat_helicoid, (-1, 1), (0, 2 * flat_helicoid.W), 51, 50)
        assert grid.u[25] == 0.0
        axis = grid.positions[25]
        assert np.allclose(axis[:, :2], 0, atol=1e-15)
        assert np.allclose(axis[:, 2], [flat_helicoid.x3(v) for v in grid.v])
        path = tmp_path / "h.obj"
        export_mesh(grid, path)
        assert path.read_text().count("\nv ") + 1 == 51 * 50

    def test_deterministic_and_threads(self, tmp_path, monkeypatch, aniso_catenoid):
        p = aniso_catenoid
        a = sample_catenoid(p, (0, 2 * p.U), (-1, 1), 6, 5)
        monkeypatch.setenv("E2SURF_THREADS", "3")
        assert thread_count() == 3
        b = sample_catenoid(p, (0, 2 * p.U), (-1, 1), 6, 5)
        assert obj_text(a.positions) == obj_text(b.positions)
        monkeypatch.setenv("E2SURF_THREADS", "nonsense")
        assert thread_count() == 1


class TestCsv:
    def test_header_only(self, tmp_path):
        path = tmp_path / "e.csv"
        export_curve([], [], path)
        assert path.read_text() == "u,x1,x2,x3\n"

    def test_catenoid_section_closed(self, tmp_path, aniso_catenoid):
        cs = catenoid.cross_section(aniso_catenoid, 0.0)
        rows = curve_text(cs.u, cs.points).splitlines()[1:]
        first = np.array(rows[0].split(","), dtype=float)[1:]
        last = np.array(rows[-1].split(","), dtype=float)[1:]
        assert np.max(np.abs(first - last)) < 1e-8

    def test_helicoid_section_collinear(self, flat_helicoid):
        sec = helicoid.cross_section(flat_helicoid, 0.0)
        us = np.linspace(-1, 1, 11)
        pts = [helicoid.immerse(flat_helicoid, u, sec.v0).as_array() for u in us]
        rows = [np.array(r.split(","), dtype=float) for r in curve_text(us, pts).splitlines()[1:]]
        for r in rows:
            assert abs(r[1] * sec.k2 - r[2] * sec.k1) < 1e-12

    def test_non_finite(self):
        with pytest.raises(ValueError):
            curve_text([0.0], [(1.0, math.inf, 0.0)])


class TestVerification:
    def test_flat_helicoid(self, tmp_path):
        cfg = parse_config(None, {"K": 0.75, "report": str(tmp_path / "r.json")})
        rep = run_verification(cfg)
        assert rep.ok
        assert abs(rep.metadata["W"] - 2 * math.pi) < 1e-10
        data = json.loads((tmp_path / "r.json").read_text())
        assert data["config_hash"] == cfg.config_hash()
        assert data["summary"]["failed"] == 0
        assert set(data["records"][0]) >= {"name", "anchor", "value", "tol", "pass"}

    def test_flat_catenoid(self):
        rep = run_verification(parse_config(None, {"c": 2.0}))
        assert rep.ok
        assert abs(rep.metadata["H"]) < 1e-10
        assert abs(rep.metadata["total_abs_curvature"] - 4 * math.pi) < 1e-3

    def test_wrong_theta_fails(self):
        rep = run_verification(parse_config(None, {"c": 2.0, "theta": 1.0}))
        assert not rep.ok
        failed = {r.name for r in rep.records if not r.passed}
        assert "X(z + Z) = X(z)" in failed


class TestCli:
    def run(self, capsys, *argv):
        code = main(list(argv))
        out = capsys.readouterr()
        return code, out.out, out.err

    def test_helicoid_mesh(self, tmp_path, capsys):
        mesh = tmp_path / "h.obj"
        code, out, _ = self.run(capsys, "helicoid", "--K", "0.5", "--nu", "4", "--nv", "3",
                                "--mesh", str(mesh))
        assert code == 0
        assert json.loads(out)["K"] == 0.5
        assert mesh.read_text().count("\nf ") == 2 * 3 * 2

    def test_solve_period(self, capsys):
        code, out, _ = self.run(capsys, "helicoid", "solve-period", "--T", str(2 * math.pi))
        assert code == 0 and abs(json.loads(out)["K"] - 0.75) < 1e-9

    def test_solve_theta(self, capsys):
        code, out, _ = self.run(capsys, "catenoid", "solve-theta", "--c", "2")
        assert code == 0 and abs(json.loads(out)["theta"] - 1.2258) < 1e-4

    def test_cross_section_csv(self, tmp_path, capsys):
        csv = tmp_path / "s.csv"
        code, out, _ = self.run(capsys, "cross-section", "--c", "2", "--lambda1", "2",
                                "--samples", "65", "--csv", str(csv))
        assert code == 0
        summary = json.loads(out)
        assert summary["convex"] and summary["winding"] == 1
        assert len(csv.read_text().splitlines()) == 66

    def test_verify_exit_codes(self, tmp_path, capsys):
        rep = tmp_path / "r.json"
        assert self.run(capsys, "verify", "--K", "0.75", "--report", str(rep))[0] == 0
        assert json.loads(rep.read_text())["summary"]["failed"] == 0
        assert self.run(capsys, "verify", "--c", "2", "--theta", "1.0", "--report", str(rep))[0] == 1
        json.loads(rep.read_text())  # still strict JSON

    def test_config_error_exit(self, capsys):
        code, _, err = self.run(capsys, "helicoid", "--K", "0.5", "--lambda1", "1", "--lambda2", "2")
        assert code == 2 and "lambda1" in err

    def test_limit_study(self, capsys):
        code, out, _ = self.run(capsys, "limit-study", "--lambda1", "2", "--c-list", "10", "50")
        rows = json.loads(out)["rows"]
        assert code == 0 and rows[1]["deviation"] < rows[0]["deviation"]
