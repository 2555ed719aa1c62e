import json

import pytest
from mpmath import mp

from dft_hermite.cli import main


def run(argv):
    return main(argv)


class TestGenerate:
    def test_writes_table(self, tmp_path, capsys):
        out = tmp_path / "t.tsv"
        assert run(["generate", "-n", "8", "-d", "120", "-o", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 8 and len(lines[0].split("\t")) == 8
        assert "wrote" in capsys.readouterr().out

    def test_default_max_output_clamps_to_digits(self, tmp_path):
        # digits=100 cannot carry the default 100 printed digits; the
        # default budget clamps to 90 instead of refusing to run
        out = tmp_path / "t.tsv"
        assert run(["generate", "-n", "8", "-d", "100", "-o", str(out)]) == 0
        first = out.read_text().split("\t", 2)[1]
        mantissa_digits = len(first.split("e")[0].replace(".", "").lstrip("-"))
        assert mantissa_digits <= 90

    def test_explicit_max_output_too_large_is_an_error(self, tmp_path):
        with pytest.raises(SystemExit):
            run(["generate", "-n", "8", "-d", "100",
                 "--max-output-digits", "95", "-o", str(tmp_path / "t.tsv")])

    def test_insufficient_precision_exit_code(self, tmp_path):
        rc = run(["generate", "-n", "32", "-d", "40",
                  "--max-output-digits", "30", "-o", str(tmp_path / "t.tsv")])
        assert rc == 1

    def test_construction_choice_and_determinism(self, tmp_path):
        a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
        assert run(["generate", "-n", "6", "-d", "110", "-o", str(a)]) == 0
        assert run(["generate", "-n", "6", "-d", "110", "-o", str(b),
                    "--construction", "gram-schmidt"]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_csv_format(self, tmp_path):
        out = tmp_path / "t.csv"
        assert run(["generate", "-n", "5", "-d", "110", "-o", str(out),
                    "--format", "csv"]) == 0
        assert len(out.read_text().splitlines()[0].split(",")) == 5


class TestVerify:
    def test_pass_smallest_generic_case(self, capsys):
        assert run(["verify", "-n", "5", "-d", "100"]) == 0
        out = capsys.readouterr().out
        assert "PASS" in out

    def test_both_constructions_report_deviation(self, tmp_path, capsys):
        rep = tmp_path / "r.json"
        assert run(["verify", "-n", "8", "-d", "100",
                    "--construction", "both", "-o", str(rep)]) == 0
        doc = json.loads(rep.read_text())
        assert doc["schema_version"] == 1
        assert doc["passed"] is True
        assert doc["oracle_deviation"] != "n/a"
        assert mp.mpf(doc["oracle_deviation"]) <= mp.mpf(10) ** -60

    def test_gram_schmidt_only(self):
        assert run(["verify", "-n", "6", "-d", "80",
                    "--construction", "gram-schmidt"]) == 0

    def test_track_error_reports_interval_loss(self, capsys):
        assert run(["verify", "-n", "12", "-d", "80", "--track-error"]) == 0
        assert "interval" in capsys.readouterr().out


class TestSeedsCommand:
    def test_identities_flagged_ok(self, capsys):
        assert run(["seeds", "-n", "7", "-d", "64"]) == 0
        out = capsys.readouterr().out
        assert out.count("[ok]") == 4
        assert "VIOLATED" not in out
        # S(N-1) = N shows up as 7.0
        assert "S(6) = 7.0" in out

    def test_constant_u_row_for_even_n(self, tmp_path):
        dump = tmp_path / "seeds.json"
        assert run(["seeds", "-n", "8", "-d", "64", "-o", str(dump)]) == 0
        doc = json.loads(dump.read_text())
        with mp.workdps(64):
            row = [mp.mpf(s) for s in doc["u"]["4"]]
            c = 1 / (2 * mp.sqrt(8))
            assert all(abs(x - c) <= mp.mpf(10) ** -40 for x in row)
        assert doc["t"][doc["n_dim"] // 2 - 1] == "0.0"  # t_0, index of k=0

    def test_t_zero_n9(self, tmp_path):
        dump = tmp_path / "seeds.json"
        assert run(["seeds", "-n", "9", "-d", "64", "-o", str(dump)]) == 0
        doc = json.loads(dump.read_text())
        assert doc["t"][4] == "0.0"  # k = 0 sits at offset -lo = 4


class TestConvergenceCommand:
    def test_small_run(self, tmp_path, capsys):
        out = tmp_path / "conv.json"
        rc = run(["convergence", "--orders", "0,1", "--dims", "32,64",
                  "-d", "300", "-o", str(out), "--format", "json"])
        assert rc == 0
        doc = json.loads(out.read_text())
        assert doc["monotone"] == {"0": True, "1": True}


class TestConfigResolution:
    def test_toml_config(self, tmp_path):
        cfg = tmp_path / "run.toml"
        cfg.write_text('n_dim = 5\ndigits = 110\n')
        out = tmp_path / "t.tsv"
        assert run(["generate", "--config", str(cfg), "-o", str(out)]) == 0
        assert len(out.read_text().splitlines()) == 5

    def test_flags_beat_config(self, tmp_path):
        cfg = tmp_path / "run.toml"
        cfg.write_text('n_dim = 5\n')
        out = tmp_path / "t.tsv"
        assert run(["generate", "--config", str(cfg), "-n", "6",
                    "-d", "110", "-o", str(out)]) == 0
        assert len(out.read_text().splitlines()) == 6

    def test_env_var_digits(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("DFT_HERMITE_DIGITS", "77")
        assert run(["verify", "-n", "5"]) == 0
        assert "digits=77" in capsys.readouterr().out

    def test_flag_beats_env(self, monkeypatch, capsys):
        monkeypatch.setenv("DFT_HERMITE_DIGITS", "77")
        assert run(["verify", "-n", "5", "-d", "66"]) == 0
        assert "digits=66" in capsys.readouterr().out

    def test_missing_n_dim(self):
        with pytest.raises(SystemExit):
            run(["verify"])

    def test_n_too_small(self):
        with pytest.raises(SystemExit):
            run(["verify", "-n", "1"])
