"""Sweep engine: configuration, accounting, determinism, CSV and CLI."""

import io

import numpy as np
import pytest

from scckm.cli import build_config, main, parse_ebn0, read_config_file
from scckm.ofdm import OfdmParams
from scckm.sim import (SimConfig, canonical_config_string, emit_csv,
                       noise_variance, read_csv, run_point, run_sweep)


def small_config(**overrides):
    base = dict(scheme="scck2", n_tx=2, n_rx=2, ebn0_db=(4.0,), frames=3,
                seed=9, symbols_per_frame=4, ofdm=OfdmParams(n_sub=32, cp_len=4))
    base.update(overrides)
    return SimConfig(**base)


class TestSimConfig:
    def test_scck_antenna_count_is_bound_to_scheme(self):
        with pytest.raises(ValueError):
            small_config(scheme="scck4", n_tx=2)

    def test_zero_forcing_needs_enough_receivers(self):
        with pytest.raises(ValueError):
            small_config(scheme="sm-4qam", n_tx=4, n_rx=2)

    def test_unknown_scheme(self):
        with pytest.raises(ValueError):
            small_config(scheme="qpsk")

    def test_rejects_nan_and_negative_inf(self):
        with pytest.raises(ValueError):
            small_config(ebn0_db=(float("nan"),))
        with pytest.raises(ValueError):
            small_config(ebn0_db=(float("-inf"),))

    def test_taps_must_fit_in_prefix(self):
        with pytest.raises(ValueError):
            small_config(taps=6)

    def test_bits_per_subcarrier(self):
        assert small_config().bits_per_subcarrier == 2
        assert small_config(scheme="scck8", n_tx=8, n_rx=8).bits_per_subcarrier == 8
        assert small_config(scheme="sm-4qam", n_tx=4, n_rx=4).bits_per_subcarrier == 4
        assert small_config(scheme="sm-bpsk", n_tx=8, n_rx=8).bits_per_subcarrier == 4

    def test_ebn0_coerced_to_floats(self):
        cfg = small_config(ebn0_db=(0, 4))
        assert cfg.ebn0_db == (0.0, 4.0)


class TestNoiseVariance:
    def test_formula(self):
        cfg = small_config(scheme="scck4", n_tx=4, n_rx=4)
        assert abs(noise_variance(cfg, 10.0) - 1 / 40) < 1e-15

    def test_infinite_snr_is_noiseless(self):
        assert noise_variance(small_config(), float("inf")) == 0.0


class TestRunPoint:
    def test_bit_accounting(self):
        cfg = small_config()
        pt = run_point(cfg, 4.0)
        assert pt.bits_simulated == 3 * 4 * 32 * 2
        assert pt.ber == pt.bit_errors / pt.bits_simulated

    def test_noiseless_is_error_free(self):
        pt = run_point(small_config(), float("inf"))
        assert pt.bit_errors == 0
        assert pt.ber == 0.0

    def test_same_seed_reproduces(self):
        cfg = small_config(ebn0_db=(2.0,))
        assert run_point(cfg, 2.0) == run_point(cfg, 2.0)

    def test_seed_changes_result(self):
        a = run_point(small_config(ebn0_db=(0.0,)), 0.0)
        b = run_point(small_config(ebn0_db=(0.0,), seed=10), 0.0)
        assert a.bit_errors != b.bit_errors

    def test_worker_count_is_invisible(self):
        cfg = small_config(frames=12, ebn0_db=(3.0,))
        assert run_point(cfg, 3.0, workers=1) == run_point(cfg, 3.0, workers=4)

    def test_early_stop_counts_whole_frames(self):
        cfg = small_config(scheme="scck2", frames=50, ebn0_db=(0.0,),
                           max_bit_errors=30)
        pt = run_point(cfg, 0.0)
        frame_bits = 4 * 32 * 2
        assert pt.bit_errors >= 30
        assert pt.bits_simulated % frame_bits == 0
        assert pt.bits_simulated < 50 * frame_bits

    def test_sm_scheme_runs(self):
        cfg = small_config(scheme="sm-bpsk", n_tx=2, n_rx=4, ebn0_db=(6.0,))
        pt = run_point(cfg, 6.0)
        assert pt.bits_simulated == 3 * 4 * 32 * 2


class TestSweep:
    def test_points_sorted_ascending(self):
        cfg = small_config(ebn0_db=(8.0, 0.0, 4.0))
        curve = run_sweep(cfg)
        assert [p.ebn0_db for p in curve.points] == [0.0, 4.0, 8.0]

    def test_ber_trend_with_common_randomness(self):
        cfg = small_config(scheme="scck2", n_rx=4, frames=6,
                           ebn0_db=(0.0, 8.0, float("inf")))
        curve = run_sweep(cfg)
        bers = [p.ber for p in curve.points]
        assert bers[0] >= bers[1] >= bers[2]
        assert bers[2] == 0.0


class TestCsv:
    def test_round_trip(self):
        cfg = small_config(ebn0_db=(0.0, 4.0))
        curve = run_sweep(cfg)
        buf = io.StringIO()
        emit_csv(curve, buf)
        text = buf.getvalue()
        assert text.startswith("# config: scheme=scck2 ntx=2 nrx=2 ")
        assert "# seed: 9\n" in text
        assert "ebn0_db,bits_simulated,bit_errors,ber\n" in text
        config_str, seed, points = read_csv(io.StringIO(text))
        assert config_str == canonical_config_string(cfg)
        assert seed == 9
        assert [tuple(p) for p in points] == [tuple(p) for p in curve.points]

    def test_canonical_string_excludes_scheduling(self):
        cfg = small_config()
        s = canonical_config_string(cfg)
        assert "workers" not in s
        assert "max_bit_errors=none" in s

    def test_file_destination(self, tmp_path):
        cfg = small_config()
        curve = run_sweep(cfg)
        path = tmp_path / "out.csv"
        emit_csv(curve, path)
        config_str, seed, points = read_csv(path)
        assert seed == cfg.seed and len(points) == 1


class TestParseEbn0:
    def test_range_is_inclusive(self):
        assert parse_ebn0("0:2:10") == (0.0, 2.0, 4.0, 6.0, 8.0, 10.0)

    def test_fractional_step(self):
        vals = parse_ebn0("0:2.5:5")
        assert vals == (0.0, 2.5, 5.0)

    def test_comma_list_with_inf(self):
        assert parse_ebn0("1,3.5,inf") == (1.0, 3.5, float("inf"))

    @pytest.mark.parametrize("bad", ["", "0:0:4", "0:2", "a,b"])
    def test_malformed(self, bad):
        with pytest.raises(ValueError):
            parse_ebn0(bad)


class TestConfigFile:
    def test_parse_and_override(self, tmp_path):
        cfg_file = tmp_path / "run.cfg"
        cfg_file.write_text(
            "# comment\n"
            "scheme = scck2\n"
            "nrx = 2\n"
            "ebn0 = 0:5:10\n"
            "frames = 7\n"
            "max-bit-errors = 100\n"
        )
        settings = read_config_file(str(cfg_file))
        assert settings["scheme"] == "scck2"
        assert settings["max_bit_errors"] == "100"

    def test_bad_line(self, tmp_path):
        cfg_file = tmp_path / "run.cfg"
        cfg_file.write_text("scheme scck2\n")
        with pytest.raises(ValueError):
            read_config_file(str(cfg_file))


class TestBuildConfig:
    def test_ntx_implied_by_scheme(self):
        cfg = build_config({"scheme": "scck4", "nrx": 8, "ebn0": (6.0,)})
        assert cfg.n_tx == 4

    def test_sm_requires_explicit_ntx(self):
        with pytest.raises(ValueError):
            build_config({"scheme": "sm-bpsk", "nrx": 4, "ebn0": (6.0,)})

    def test_defaults(self):
        cfg = build_config({"scheme": "scck2", "nrx": 2, "ebn0": (0.0,)})
        assert cfg.frames == 1000 and cfg.seed == 1 and cfg.taps == 2
        assert cfg.ofdm == OfdmParams()


class TestMain:
    def common_args(self, tmp_path):
        return ["--scheme", "scck2", "--nrx", "2", "--ebn0", "inf",
                "--frames", "2", "--symbols-per-frame", "2", "--nsub", "32",
                "--cp", "4", "--out", str(tmp_path / "run.csv")]

    def test_writes_csv(self, tmp_path):
        assert main(self.common_args(tmp_path)) == 0
        config_str, seed, points = read_csv(tmp_path / "run.csv")
        assert seed == 1
        assert points[0].bit_errors == 0

    def test_stdout_when_no_out(self, capsys):
        rc = main(["--scheme", "scck2", "--nrx", "2", "--ebn0", "inf",
                   "--frames", "1", "--symbols-per-frame", "1",
                   "--nsub", "32", "--cp", "4"])
        captured = capsys.readouterr()
        assert rc == 0
        assert captured.out.startswith("# config: ")

    def test_config_file_with_flag_override(self, tmp_path, capsys):
        cfg_file = tmp_path / "run.cfg"
        cfg_file.write_text("scheme=scck2\nnrx=2\nebn0=inf\nframes=5\n"
                            "symbols-per-frame=1\nnsub=32\ncp=4\n")
        out = tmp_path / "o.csv"
        rc = main(["--config", str(cfg_file), "--frames", "1", "--out", str(out)])
        assert rc == 0
        config_str, _, _ = read_csv(out)
        assert "frames=1 " in config_str

    def test_invalid_arguments_exit_1(self, tmp_path, capsys):
        rc = main(["--scheme", "scck2", "--nrx", "1", "--ebn0", "10"])
        captured = capsys.readouterr()
        assert rc == 1
        assert captured.err.startswith("error:")

    def test_missing_scheme_exits_1(self):
        assert main(["--nrx", "2", "--ebn0", "10"]) == 1

    def test_workers_flag(self, tmp_path):
        out = tmp_path / "w.csv"
        rc = main(["--scheme", "scck2", "--nrx", "2", "--ebn0", "0,4",
                   "--frames", "4", "--symbols-per-frame", "2", "--nsub", "32",
                   "--cp", "4", "--workers", "3", "--out", str(out)])
        assert rc == 0
        _, _, points = read_csv(out)
        assert len(points) == 2
