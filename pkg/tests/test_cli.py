"""Config parsing, strain-file ingestion and end-to-end CLI runs."""

import numpy as np
import pytest

from gwdenoise import cli
from gwdenoise.config import PipelineConfig, load_config, parse_config_text
from gwdenoise.errors import ConfigError, DataError
from gwdenoise.spectral import read_spectrum_csv
from gwdenoise.strainfile import StrainFile, read_strain, write_strain

DESK_CONFIG = """
# desk-scale pipeline configuration
grid.m1_min = 36.0
grid.m1_max = 37.0
grid.m2_min = 29.0
grid.m2_max = 29.0
grid.step = 1.0
grid.detectors = H1,L1
grid.sample_rate_hz = 256.0
grid.f_min_hz = 25.0
training.hidden_dim = 12
training.max_epochs = 5
training.seed = 42
"""


def write_config(tmp_path, extra=""):
    path = tmp_path / "pipeline.cfg"
    text = DESK_CONFIG + extra + (
        f"paths.bank_dir = {tmp_path / 'bank'}\n"
        f"paths.model_path = {tmp_path / 'model.txt'}\n"
        f"paths.output_dir = {tmp_path / 'out'}\n"
    )
    path.write_text(text)
    return path


class TestConfigParsing:
    def test_defaults_without_file(self):
        cfg = load_config(None)
        assert cfg.grid.m1_min == 32.0
        assert cfg.training.max_epochs == 100
        assert cfg.training.l2_weight == 0.001
        assert cfg.training.sparsity_weight == 4.0
        assert cfg.training.sparsity_target == 0.05

    def test_parse_sections(self):
        cfg = parse_config_text(DESK_CONFIG)
        assert cfg.grid.m1_max == 37.0
        assert cfg.grid.detectors == ("H1", "L1")
        assert cfg.grid.sample_rate == 256.0
        assert cfg.training.hidden_dim == 12
        assert cfg.training.seed == 42

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError, match="unknown key"):
            parse_config_text("grid.m1_typo = 3\n")
        with pytest.raises(ConfigError, match="unknown key"):
            parse_config_text("unrelated = 1\n")

    def test_bad_value_rejected(self):
        with pytest.raises(ConfigError, match="bad value"):
            parse_config_text("training.max_epochs = soon\n")

    def test_detector_angle_override(self):
        cfg = parse_config_text("detectors.H1.theta = 0.9\ndetectors.H1.psi = 0.1\n")
        assert cfg.detector_angles["H1"].theta == 0.9
        assert cfg.detector_angles["H1"].psi == 0.1
        assert cfg.detector_angles["H1"].phi == 1.20  # default retained

    def test_decoder_choice_validated(self):
        cfg = parse_config_text("training.decoder = logsig\n")
        assert cfg.training.decoder_activation == "logsig"
        with pytest.raises(ConfigError, match="decoder"):
            parse_config_text("training.decoder = relu\n")

    def test_comments_and_blank_lines(self):
        cfg = parse_config_text("# comment\n\ngrid.step = 1.0\n")
        assert cfg.grid.step == 1.0

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="missing config"):
            load_config(tmp_path / "nope.cfg")


class TestStrainFile:
    def make_file(self, tmp_path, rate=4096.0):
        rng = np.random.default_rng(0)
        sf = StrainFile(detector="H1", gps_start=1126259446.0, sample_rate=rate,
                        values=rng.normal(size=64) * 1e-21)
        path = tmp_path / "strain.txt"
        write_strain(sf, path)
        return sf, path

    def test_round_trip(self, tmp_path):
        sf, path = self.make_file(tmp_path)
        loaded = read_strain(path)
        assert loaded.detector == "H1"
        assert loaded.gps_start == sf.gps_start
        assert loaded.sample_rate == sf.sample_rate
        np.testing.assert_array_equal(loaded.values, sf.values)

    def test_malformed_sample_names_line(self, tmp_path):
        _, path = self.make_file(tmp_path)
        lines = path.read_text().splitlines()
        lines[10] = "not-a-number"
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(DataError, match=":11:"):
            read_strain(path)

    def test_missing_header(self, tmp_path):
        path = tmp_path / "strain.txt"
        path.write_text("1.0\n2.0\n")
        with pytest.raises(DataError, match="header"):
            read_strain(path)

    def test_unusual_rate_warns(self, tmp_path):
        _, path = self.make_file(tmp_path, rate=1000.0)
        with pytest.warns(UserWarning, match="unusual sample rate"):
            read_strain(path)

    def test_expected_rates_silent(self, tmp_path, recwarn):
        for rate in (4096.0, 16384.0):
            _, path = self.make_file(tmp_path, rate=rate)
            read_strain(path)
        assert len(recwarn) == 0


class TestCmdBank:
    def test_bank_generation(self, tmp_path, capsys):
        cfg_path = write_config(tmp_path)
        assert cli.main(["bank", "--config", str(cfg_path)]) == 0
        out = capsys.readouterr().out
        assert "templates = 4" in out
        assert "length = " in out
        assert "elapsed_s = " in out
        files = list((tmp_path / "bank").iterdir())
        assert len(files) == 5  # 4 templates + manifest

    def test_threads_do_not_change_bytes(self, tmp_path):
        (tmp_path / "a").mkdir()
        (tmp_path / "b").mkdir()
        cfg1 = write_config(tmp_path / "a")
        cfg2 = write_config(tmp_path / "b")
        assert cli.main(["bank", "--config", str(cfg1), "--threads", "1"]) == 0
        assert cli.main(["bank", "--config", str(cfg2), "--threads", "4"]) == 0
        files1 = sorted((tmp_path / "a" / "bank").iterdir())
        files2 = sorted((tmp_path / "b" / "bank").iterdir())
        assert [f.name for f in files1] == [f.name for f in files2]
        for f1, f2 in zip(files1, files2):
            assert f1.read_bytes() == f2.read_bytes()

    def test_unwritable_bank_dir(self, tmp_path, capsys):
        blocker = tmp_path / "blocker"
        blocker.write_text("file, not a directory")
        cfg_path = tmp_path / "pipeline.cfg"
        cfg_path.write_text(DESK_CONFIG + f"paths.bank_dir = {blocker / 'bank'}\n")
        code = cli.main(["bank", "--config", str(cfg_path)])
        assert code != 0
        assert "error:" in capsys.readouterr().err

    def test_nyquist_violation_is_config_error(self, tmp_path, capsys):
        cfg_path = tmp_path / "pipeline.cfg"
        cfg_path.write_text(DESK_CONFIG.replace("grid.sample_rate_hz = 256.0",
                                                "grid.sample_rate_hz = 64.0"))
        assert cli.main(["bank", "--config", str(cfg_path)]) == 2


@pytest.fixture()
def trained_pipeline(tmp_path):
    cfg_path = write_config(tmp_path)
    assert cli.main(["bank", "--config", str(cfg_path)]) == 0
    assert cli.main(["train", "--config", str(cfg_path)]) == 0
    return cfg_path, tmp_path


class TestCmdTrain:
    def test_outputs(self, trained_pipeline, capsys):
        _, tmp_path = trained_pipeline
        assert (tmp_path / "model.txt").is_file()
        trace = (tmp_path / "out" / "trace.csv").read_text().splitlines()
        assert trace[0] == "epoch,total,mse,l2,sparsity"
        assert len(trace) == 1 + 5  # header + max_epochs rows
        assert (tmp_path / "out" / "training_curve.png").is_file()

    def test_seed_repeat_identical_trace(self, tmp_path):
        cfg_path = write_config(tmp_path)
        assert cli.main(["bank", "--config", str(cfg_path)]) == 0
        assert cli.main(["train", "--config", str(cfg_path)]) == 0
        first = (tmp_path / "out" / "trace.csv").read_bytes()
        assert cli.main(["train", "--config", str(cfg_path)]) == 0
        assert (tmp_path / "out" / "trace.csv").read_bytes() == first

    def test_seed_flag_changes_model(self, tmp_path):
        cfg_path = write_config(tmp_path)
        assert cli.main(["bank", "--config", str(cfg_path)]) == 0
        assert cli.main(["train", "--config", str(cfg_path)]) == 0
        first = (tmp_path / "model.txt").read_bytes()
        assert cli.main(["train", "--config", str(cfg_path), "--seed", "7"]) == 0
        assert (tmp_path / "model.txt").read_bytes() != first

    def test_missing_bank_dir(self, tmp_path, capsys):
        cfg_path = write_config(tmp_path)  # bank never generated
        code = cli.main(["train", "--config", str(cfg_path)])
        assert code == 3
        assert "manifest" in capsys.readouterr().err


def make_strain_file(path, n, rate=256.0, seed=1):
    rng = np.random.default_rng(seed)
    sf = StrainFile(detector="H1", gps_start=1126259446.0, sample_rate=rate,
                    values=rng.normal(size=n) * 1e-21)
    write_strain(sf, path)
    return sf


class TestCmdDenoise:
    def test_length_preserved_and_header_round_trip(self, trained_pipeline, capsys):
        _, tmp_path = trained_pipeline
        strain_path = tmp_path / "input_strain.txt"
        make_strain_file(strain_path, n=700)
        out_path = tmp_path / "denoised.txt"
        code = cli.main(["denoise", str(tmp_path / "model.txt"), str(strain_path), str(out_path)])
        assert code == 0
        result = read_strain(out_path)
        assert len(result.values) == 700
        assert result.detector == "H1"
        assert result.gps_start == 1126259446.0
        assert result.sample_rate == 256.0

    def test_malformed_sample_line(self, trained_pipeline, capsys):
        _, tmp_path = trained_pipeline
        strain_path = tmp_path / "input_strain.txt"
        make_strain_file(strain_path, n=300)
        lines = strain_path.read_text().splitlines()
        lines[20] = "oops"
        strain_path.write_text("\n".join(lines) + "\n")
        code = cli.main(["denoise", str(tmp_path / "model.txt"), str(strain_path),
                         str(tmp_path / "denoised.txt")])
        assert code == 3
        assert ":21:" in capsys.readouterr().err

    def test_constant_input(self, trained_pipeline, capsys):
        _, tmp_path = trained_pipeline
        strain_path = tmp_path / "flat.txt"
        sf = StrainFile(detector="L1", gps_start=0.0, sample_rate=4096.0,
                        values=np.full(256, 2.5e-21))
        write_strain(sf, strain_path)
        code = cli.main(["denoise", str(tmp_path / "model.txt"), str(strain_path),
                         str(tmp_path / "denoised.txt")])
        assert code == 3
        assert "constant" in capsys.readouterr().err


class TestCmdEval:
    def write_pair(self, tmp_path, n=512, rate=256.0):
        rng = np.random.default_rng(3)
        values = rng.normal(size=n)
        inp = tmp_path / "in.txt"
        half = tmp_path / "half.txt"
        write_strain(StrainFile("H1", 0.0, rate, values), inp)
        write_strain(StrainFile("H1", 0.0, rate, values / 2.0), half)
        return inp, half

    def test_half_signal_prints_zero_db(self, tmp_path, capsys):
        inp, half = self.write_pair(tmp_path)
        cfg_path = write_config(tmp_path)
        assert cli.main(["eval", "--config", str(cfg_path), str(inp), str(half)]) == 0
        out = capsys.readouterr().out
        assert "residual_snr_db = 0.00 dB" in out

    def test_clean_reference_metrics_and_sentinel(self, tmp_path, capsys):
        inp, half = self.write_pair(tmp_path)
        cfg_path = write_config(tmp_path)
        # clean identical to the denoised file: oracle saturates to +inf
        assert cli.main(["eval", "--config", str(cfg_path), str(inp), str(half), str(half)]) == 0
        out = capsys.readouterr().out
        assert "oracle_snr_db = +inf dB" in out
        assert "snr_gain_db = +inf dB" in out

    def test_spectra_written_and_parse_back(self, tmp_path, capsys):
        inp, half = self.write_pair(tmp_path)
        cfg_path = write_config(tmp_path)
        assert cli.main(["eval", "--config", str(cfg_path), str(inp), str(half)]) == 0
        out_dir = tmp_path / "out"
        for name in ("input_asd.csv", "denoised_asd.csv"):
            spec = read_spectrum_csv(out_dir / name)
            assert np.all(spec.psd >= 0.0)
            np.testing.assert_allclose(spec.asd, np.sqrt(spec.psd), rtol=1e-12)
        assert (out_dir / "asd_comparison.png").is_file()
        assert (out_dir / "strain_overlay.png").is_file()

    def test_length_mismatch(self, tmp_path, capsys):
        inp, _ = self.write_pair(tmp_path)
        short = tmp_path / "short.txt"
        make_strain_file(short, n=100)
        cfg_path = write_config(tmp_path)
        assert cli.main(["eval", "--config", str(cfg_path), str(inp), str(short)]) == 3
        assert "length mismatch" in capsys.readouterr().err


class TestExitCodes:
    def test_config_error_is_2(self, tmp_path):
        bad = tmp_path / "bad.cfg"
        bad.write_text("grid.bogus = 1\n")
        assert cli.main(["bank", "--config", str(bad)]) == 2

    def test_data_error_is_3(self, tmp_path):
        assert cli.main(["denoise", str(tmp_path / "no-model.txt"),
                         str(tmp_path / "x.txt"), str(tmp_path / "y.txt")]) == 3
