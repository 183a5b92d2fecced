"""Figure scripts: schema validation, determinism, and end-to-end runs on
files produced by the qpt-bounds CLI."""

import json
import subprocess
import sys

import pytest

from qpt_figures.cli import main
from qpt_figures.plots import SchemaError, plot_profiles, plot_scatter


def write(path, text):
    path.write_text(text)
    return path


@pytest.fixture(scope="module")
def cli_outputs(tmp_path_factory):
    """Small real outputs from the primary CLI."""
    out = tmp_path_factory.mktemp("cli")
    subprocess.run(
        [sys.executable, "-m", "qpt_bounds.cli", "gen-toy", "--seed", "6",
         "--out", str(out)], check=True)
    subprocess.run(
        [sys.executable, "-m", "qpt_bounds.cli", "analyze",
         "--instance", str(out / "toy_s6.json"), "--grid", "51",
         "--ndpt", "--seed", "6", "--out", str(out)], check=True)
    subprocess.run(
        [sys.executable, "-m", "qpt_bounds.cli", "scatter",
         "--seeds", "1..3", "--n", "64", "--d", "4", "--v-size", "8",
         "--grid", "31", "--out", str(out)], check=True)
    subprocess.run(
        [sys.executable, "-m", "qpt_bounds.cli", "sweep-wmis",
         "--w-l-grid", "1.6,1.8", "--skip-exact", "--ndpt",
         "--out", str(out)], check=True)
    return out


class TestProfiles:
    def test_renders(self, cli_outputs, tmp_path):
        code = main(["profiles", "--in", str(cli_outputs / "toy_s6.sweep.csv"),
                     str(cli_outputs / "toy_s6.report.json"),
                     "--out", str(tmp_path / "fig.png")])
        assert code == 0
        assert (tmp_path / "fig.png").stat().st_size > 0

    def test_deterministic(self, cli_outputs, tmp_path):
        for name in ("a.png", "b.png"):
            main(["profiles", "--in", str(cli_outputs / "toy_s6.sweep.csv"),
                  str(cli_outputs / "toy_s6.report.json"),
                  "--out", str(tmp_path / name)])
        assert (tmp_path / "a.png").read_bytes() == \
            (tmp_path / "b.png").read_bytes()

    def test_empty_csv_rejected(self, cli_outputs, tmp_path):
        empty = write(tmp_path / "empty.csv", "s,e0,e1,gap,fidelity,de0_ds\n")
        with pytest.raises(SchemaError):
            plot_profiles(empty, cli_outputs / "toy_s6.report.json",
                          tmp_path / "fig.png")

    def test_bad_schema_version_exit_2(self, cli_outputs, tmp_path):
        rep = json.loads((cli_outputs / "toy_s6.report.json").read_text())
        rep["schema"] = 99
        bad = write(tmp_path / "bad.json", json.dumps(rep))
        code = main(["profiles", "--in", str(cli_outputs / "toy_s6.sweep.csv"),
                     str(bad), "--out", str(tmp_path / "fig.png")])
        assert code == 2


class TestScatter:
    def test_renders_batch(self, cli_outputs, tmp_path):
        code = main(["scatter", "--in", str(cli_outputs / "scatter.csv"),
                     "--out", str(tmp_path / "scatter.png")])
        assert code == 0
        assert (tmp_path / "scatter.png").stat().st_size > 0

    def test_single_row(self, tmp_path):
        csv_text = ("seed,class,s_min,g_min,bound_lo,bound_hi,s_prime,"
                    "delta_e_t,ndpt_s_cross,fidelity_jump\n"
                    "1,qpt,0.8,0.001,0.75,0.9,0.6,0.5,0.95,0.81\n")
        path = write(tmp_path / "one.csv", csv_text)
        assert main(["scatter", "--in", str(path),
                     "--out", str(tmp_path / "one.png")]) == 0

    def test_missing_ndpt_column_warns_but_renders(self, tmp_path, capsys):
        csv_text = ("seed,class,s_min,g_min,bound_lo,bound_hi,s_prime,"
                    "delta_e_t,fidelity_jump\n"
                    "1,no_qpt,0.5,0.01,0.4,0.6,0.7,0.5,\n")
        path = write(tmp_path / "nondpt.csv", csv_text)
        code = main(["scatter", "--in", str(path),
                     "--out", str(tmp_path / "fig.png")])
        assert code == 0
        assert "omitted" in capsys.readouterr().err

    def test_missing_required_column_rejected(self, tmp_path):
        path = write(tmp_path / "bad.csv", "seed,class\n1,qpt\n")
        with pytest.raises(SchemaError):
            plot_scatter(path, tmp_path / "fig.png")


class TestWlSweep:
    def test_renders_bounds_only(self, cli_outputs, tmp_path):
        code = main(["wl-sweep", "--in", str(cli_outputs / "wmis_sweep.csv"),
                     "--out", str(tmp_path / "wl.png")])
        assert code == 0
        assert (tmp_path / "wl.png").stat().st_size > 0

    def test_with_exact_points(self, tmp_path):
        csv_text = ("w_l,delta_e_t,s_min_exact,bound_lo,bound_hi,"
                    "bound_hi_sym,ndpt_s_cross\n"
                    "1.8,2.4,0.6275,0.6,0.7895,0.7292,0.66\n"
                    "1.9,1.2,0.7758,0.75,0.8824,0.8434,0.81\n")
        path = write(tmp_path / "wmis.csv", csv_text)
        assert main(["wl-sweep", "--in", str(path),
                     "--out", str(tmp_path / "wl.png")]) == 0

    def test_empty_rejected(self, tmp_path):
        path = write(tmp_path / "empty.csv",
                     "w_l,delta_e_t,s_min_exact,bound_lo,bound_hi,"
                     "bound_hi_sym,ndpt_s_cross\n")
        assert main(["wl-sweep", "--in", str(path),
                     "--out", str(tmp_path / "fig.png")]) == 2
