"""Flat key-value config parsing."""

import os

import pytest

from dqdpulse.config import GATE_NAMES, load_config, parse_config_text
from dqdpulse.errors import ConfigError


class TestDefaults:
    def test_empty_text_gives_full_defaults(self):
        config = parse_config_text("")
        assert config.grid.t_final == 1.3
        assert config.grid.n_steps == 13000
        assert config.params.eps0 == 50.0
        assert config.optimizer.eta == 0.2
        assert config.optimizer.max_iterations == 20000
        assert config.optimizer.target_infidelity == 5e-5
        assert config.gate_list == GATE_NAMES
        assert config.infidelity_goal == 5e-4
        assert config.field_sign == 1.0
        assert config.spectrum_window is None
        assert config.workers == (os.cpu_count() or 1)

    def test_load_config_none(self):
        assert load_config(None) == parse_config_text("")

    def test_grid_density_follows_duration(self):
        config = parse_config_text("t_final = 1.0ns")
        assert config.grid.n_steps == 10000


class TestParsing:
    def test_suffixes_and_comments(self):
        config = parse_config_text(
            "# comment line\n"
            "t_final = 1.0ns   # trailing comment\n"
            "eps0 = 60ueV\n"
            "delta1 = 2.8GHz\n"
            "\n"
            "eta = 0.5\n")
        assert config.grid.t_final == 1.0
        assert config.params.eps0 == 60.0
        assert config.params.delta1 == 2.8
        assert config.optimizer.eta == 0.5

    def test_unknown_key_lists_valid_keys(self):
        with pytest.raises(ConfigError, match="valid keys.*t_final") as err:
            parse_config_text("tfinal = 1.0\n")
        assert "line 1" in str(err.value)

    def test_duplicate_key_rejected(self):
        with pytest.raises(ConfigError, match="duplicate"):
            parse_config_text("eta = 0.1\neta = 0.2\n")

    def test_wrong_unit_suffix_rejected(self):
        with pytest.raises(ConfigError, match="expects ns"):
            parse_config_text("t_final = 1.3GHz\n")
        with pytest.raises(ConfigError, match="bare number"):
            parse_config_text("eta = 0.5ns\n")

    def test_non_numeric_value_rejected(self):
        with pytest.raises(ConfigError, match="not a number"):
            parse_config_text("eps0 = fifty\n")

    def test_missing_equals_rejected(self):
        with pytest.raises(ConfigError, match="key = value"):
            parse_config_text("just some words\n")

    def test_integer_keys_reject_fractions(self):
        with pytest.raises(ConfigError, match="integer"):
            parse_config_text("n_steps = 10.5\n")


class TestValidation:
    def test_optimizer_range_error_names_key(self):
        with pytest.raises(ConfigError, match="eta"):
            parse_config_text("eta = -1\n")

    def test_gate_list_parsed_and_checked(self):
        config = parse_config_text("gate_list = UFT, P5\n")
        assert config.gate_list == ("UFT", "P5")
        with pytest.raises(ConfigError, match="unknown gate"):
            parse_config_text("gate_list = UFT, P9\n")
        with pytest.raises(ConfigError, match="duplicates"):
            parse_config_text("gate_list = UFT, UFT\n")

    def test_workers(self):
        assert parse_config_text("workers = 3\n").workers == 3
        with pytest.raises(ConfigError):
            parse_config_text("workers = zero\n")
        with pytest.raises(ConfigError):
            parse_config_text("workers = 0\n")

    def test_field_sign_restricted(self):
        assert parse_config_text("field_sign = -1\n").field_sign == -1.0
        with pytest.raises(ConfigError, match="field_sign"):
            parse_config_text("field_sign = 0.5\n")

    def test_sweep_range_checked(self):
        with pytest.raises(ConfigError, match="sweep_eps_min"):
            parse_config_text("sweep_eps_min = 10\nsweep_eps_max = -10\n")

    def test_spectrum_window_values(self):
        assert parse_config_text("spectrum_window = hann\n").spectrum_window == "hann"
        with pytest.raises(ConfigError, match="spectrum_window"):
            parse_config_text("spectrum_window = flat\n")


class TestLoadConfig:
    def test_reads_file(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("t_final = 1.0ns\ngate_list = P3\n")
        config = load_config(str(path))
        assert config.grid.t_final == 1.0
        assert config.gate_list == ("P3",)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            load_config(str(tmp_path / "absent.cfg"))
