import csv
import io
import json

import mpmath as mp
import numpy as np
import pytest

from pbswanson import __version__
from pbswanson import bicoherent as bc
from pbswanson.cli import main
from pbswanson.eigensystem import Flavor
from pbswanson.params import PRESETS, derive
from pbswanson.polygauss import inner_product

trapezoid = getattr(np, "trapezoid", None) or np.trapz  # numpy < 2 fallback


def read_csv(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    rows = list(csv.reader(io.StringIO("\n".join(lines))))
    return rows[0], np.array([[float(v) for v in r] for r in rows[1:]])


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestParams:
    def test_text_report(self, capsys):
        code, out, _ = run(capsys, "params", "--preset", "fig1-a")
        assert code == 0
        assert "0.2118244" in out
        assert "enforced" in out

    def test_json_round_trip(self, capsys):
        code, out, _ = run(capsys, "params", "--preset", "fig1-a", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert set(payload) >= {"config", "results", "version"}
        assert payload["version"] == __version__
        assert json.loads(json.dumps(payload)) == payload
        assert payload["results"]["derived"]["theta0"] == pytest.approx(0.2118244651, abs=1e-10)

    def test_boundary_is_parameter_error(self, capsys):
        code, _, err = run(capsys, "params", "--omega", "0.2", "--lambda", "0.1")
        assert code == 2
        assert "parameter error" in err

    def test_degenerate_warning(self, capsys):
        code, out, err = run(capsys, "params", "--alpha", "0.4", "--beta", "0.4")
        assert code == 0
        assert "degenerate" in err and "WARNING degenerate" in out


class TestSpectrum:
    def test_table(self, capsys):
        code, out, _ = run(capsys, "spectrum", "--preset", "fig1-a", "--n-max", "10")
        assert code == 0
        header, data = read_csv(out)
        assert header == ["n", "E_n", "norm_phi_times_norm_psi"]
        d = derive(PRESETS["fig1-a"])
        assert np.allclose(np.diff(data[:, 1]), float(d.Omega), atol=1e-14, rtol=0)
        assert data[0, 1] == pytest.approx(float(d.gamma)) and data[0, 1] < 0

    def test_diagnostic_increasing(self, capsys):
        _, out, _ = run(capsys, "spectrum", "--preset", "fig1-b", "--n-max", "40")
        _, data = read_csv(out)
        assert np.all(np.diff(data[5:, 2]) > 0)

    def test_header_embeds_config(self, capsys):
        _, out, _ = run(capsys, "spectrum", "--preset", "fig1-c", "--n-max", "2", "--seed", "7")
        meta = [ln for ln in out.splitlines() if ln.startswith("# config:")][0]
        cfg = json.loads(meta.split(":", 1)[1])
        assert cfg["seed"] == 7 and cfg["model"]["beta"] == 0.5 and cfg["n_max"] == 2


class TestConfigPrecedence:
    def test_flags_override_file_override_preset(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# comment\npreset = fig1-d\nomega = 0.6\nn-max = 3\n")
        _, out, _ = run(capsys, "spectrum", "--config", str(cfg), "--omega", "0.7",
                        "--format", "json")
        payload = json.loads(out)
        model = payload["config"]["model"]
        assert model == {"omega": 0.7, "lambda": 0.1, "alpha": 0.3, "beta": 1.0}
        assert payload["config"]["n_max"] == 3

    def test_unknown_key(self, capsys, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("colour = blue\n")
        assert run(capsys, "params", "--config", str(cfg))[0] == 2

    def test_missing_config_file(self, capsys, tmp_path):
        assert run(capsys, "params", "--config", str(tmp_path / "nope.cfg"))[0] == 3

    def test_bad_values(self, capsys):
        assert run(capsys, "params", "--R", "-1")[0] == 2
        assert run(capsys, "params", "--L", "0")[0] == 2
        assert run(capsys, "bicoherent", "--z", "abc")[0] == 2


def test_unwritable_output(capsys, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    code, _, err = run(capsys, "spectrum", "--out", str(blocker / "sub" / "out.csv"))
    assert code == 3 and "I/O error" in err


class TestVerify:
    def test_algebra_passes(self, capsys):
        code, out, _ = run(capsys, "verify", "--preset", "fig1-b", "--suite", "algebra")
        assert code == 0
        lines = [ln for ln in out.splitlines() if ln.startswith(("PASS", "FAIL"))]
        assert len(lines) >= 5 and all(ln.startswith("PASS") for ln in lines)

    def test_json_report(self, capsys, tmp_path):
        target = tmp_path / "v.json"
        code, _, _ = run(capsys, "verify", "--preset", "fig1-a", "--suite", "algebra",
                         "--format", "json", "--out", str(target), "--seed", "3")
        payload = json.loads(target.read_text())
        assert code == 0 and payload["results"]["all_pass"] and payload["results"]["seed"] == 3

    @pytest.mark.slow
    def test_small_disk_fails(self, capsys):
        code, out, _ = run(capsys, "verify", "--preset", "fig1-b", "--suite", "identity",
                           "--R", "0.5")
        assert code == 1
        line = [ln for ln in out.splitlines() if "resolution of identity, R=0.5" in ln][0]
        assert line.startswith("FAIL")

    @pytest.mark.slow
    def test_degenerate_all(self, capsys):
        code, out, err = run(capsys, "verify", "--alpha", "0.3", "--beta", "0.3", "--suite", "all")
        assert code == 0
        assert "WARNING degenerate" in out and "ALL PASS" in out


class TestBicoherent:
    def test_csv(self, capsys):
        code, out, _ = run(capsys, "bicoherent", "--preset", "fig1-c", "--z=1,0.5",
                           "--x-range=-1,1,0.5")
        header, data = read_csv(out)
        assert code == 0 and header[0] == "x" and data.shape == (5, 5)
        d = derive(PRESETS["fig1-c"])
        ref = bc.closed_form_state(d, Flavor.PHI, 1 + 0.5j).values(data[:, 0])
        assert np.allclose(data[:, 1] + 1j * data[:, 2], ref, rtol=1e-14, atol=0)

    def test_unknown_method_rejected_by_parser(self):
        with pytest.raises(SystemExit):
            main(["bicoherent", "--method", "magic"])


@pytest.fixture(scope="module")
def figure_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("fig")
    assert main(["figure1", "--out", str(out)]) == 0
    return out


class TestFigure1:
    def test_four_files(self, figure_dir):
        files = sorted(p.name for p in figure_dir.iterdir())
        assert files == [f"figure1_{name}.csv" for name in sorted(PRESETS)]
        for f in figure_dir.iterdir():
            header, data = read_csv(f.read_text())
            assert header == ["x", "phi_density", "psi_density"]
            assert np.all(np.diff(data[:, 0]) > 0)
            assert data[0, 0] == -6 and data[-1, 0] == 6 and len(data) == 241
            assert np.all(data[:, 1:] > 0)

    def test_peaks_separate_with_beta(self, figure_dir):
        seps = []
        for name in sorted(PRESETS):
            _, data = read_csv((figure_dir / f"figure1_{name}.csv").read_text())
            seps.append(abs(data[np.argmax(data[:, 1]), 0] - data[np.argmax(data[:, 2]), 0]))
        assert seps[-1] > seps[0]

    def test_trapezoid_matches_exact_norm(self, figure_dir):
        for name in sorted(PRESETS):
            _, data = read_csv((figure_dir / f"figure1_{name}.csv").read_text())
            d = derive(PRESETS[name])
            for col, fl in ((1, Flavor.PHI), (2, Flavor.PSI)):
                s = bc.closed_form_state(d, fl, 0).repr
                with mp.workdps(d.dps):
                    exact = float(mp.re(inner_product(s, s)))
                approx = trapezoid(data[:, col], data[:, 0])
                assert approx == pytest.approx(exact, rel=1e-6)

    def test_single_preset(self, capsys, tmp_path):
        code, out, _ = run(capsys, "figure1", "--preset", "fig1-b", "--out", str(tmp_path),
                           "--format", "json")
        assert code == 0
        payload = json.loads((tmp_path / "figure1_fig1-b.json").read_text())
        assert payload["results"]["table"]["columns"] == ["x", "phi_density", "psi_density"]
