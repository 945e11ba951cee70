"""Tests for configuration defaults, presets, files and overrides."""

import pickle
from dataclasses import replace

import numpy as np
import pytest
from numpy.testing import assert_allclose

import config
from config import ExperimentConfig
from errors import ConfigurationError


class TestDefaults:
    """Tests for the built-in operating point."""

    def test_empty_input(self, monkeypatch):
        monkeypatch.delenv(config.THREADS_ENV, raising=False)
        cfg = config.parse_config()
        assert (cfg.M, cfg.N_U, cfg.K, cfg.D, cfg.I, cfg.B) == (40, 2, 4, 8, 8, 4)
        assert (cfg.tr_length, cfg.dd_length, cfg.n_symbols) == (200, 1000, 1200)
        assert (cfg.delta1, cfg.delta2, cfg.mu_max, cfg.mu_min) == (0.99, 1e-4, 1e-2, 1e-5)
        assert (cfg.mu_lms, cfg.mu_mber, cfg.mu_reduced_rank) == (0.085, 0.05, 0.035)
        assert cfg.snr_db == 15.0 and cfg.fdT == 1e-5
        assert cfg.rho is None
        assert cfg.threads == 1

    def test_kernel_radius_is_twice_sigma(self):
        cfg = config.parse_config()
        assert_allclose(cfg.kernel_rho(), 2 * cfg.system().sigma)
        assert config.parse_config(overrides={'rho': '0.3'}).kernel_rho() == 0.3

    def test_steady_window(self):
        assert ExperimentConfig().steady_window == 250
        assert ExperimentConfig(dd_length=2).steady_window == 1
        assert ExperimentConfig(tr_length=40, dd_length=0).steady_window == 10

    def test_step_controller(self):
        ctrl = ExperimentConfig().step_controller()
        assert (ctrl.mu, ctrl.mu_plus, ctrl.mu_minus) == (1e-2, 1e-2, 1e-5)


class TestPresets:
    """Tests for the named presets."""

    def test_desk(self):
        cfg = config.parse_config(preset='desk')
        assert (cfg.M, cfg.K, cfg.N_U, cfg.D, cfg.I, cfg.B) == (16, 2, 2, 4, 4, 2)
        assert cfg.trials == 200 and cfg.snr_db == 15.0

    def test_paper_equals_defaults(self):
        assert config.parse_config(preset='paper') == config.parse_config()

    def test_unknown(self):
        with pytest.raises(ConfigurationError, match="unknown preset"):
            config.parse_config(preset='huge')


class TestValidation:
    """Tests for diagnostics naming the offending field."""

    @pytest.mark.parametrize("overrides, field", [
        ({'D': '50'}, 'D'),
        ({'I': '40'}, 'I'),
        ({'trials': '0'}, 'trials'),
        ({'tr_length': '0', 'dd_length': '0'}, 'dd_length'),
        ({'receivers': 'full-rls'}, 'receivers'),
        ({'sweep': 'doppler'}, 'sweep'),
        ({'B': '9'}, 'B'),
        ({'mu_init': '0.5'}, 'mu_init'),
        ({'desired_stream': '2'}, 'desired_stream'),
        ({'snr_db': 'inf'}, 'rho'),
        ({'rho': '-1'}, 'rho'),
        ({'seed': '-3'}, 'seed'),
    ])
    def test_field_named(self, overrides, field):
        with pytest.raises(ConfigurationError) as info:
            config.parse_config(overrides=overrides)
        assert info.value.field == field

    def test_rank_diagnostic(self):
        with pytest.raises(ConfigurationError, match="rank D=50"):
            config.parse_config(overrides={'D': 50})

    def test_user_sweep_checks_every_point(self):
        with pytest.raises(ConfigurationError, match="K\\*N_U must be < M"):
            config.parse_config(overrides={'sweep': 'users', 'k_list': '4,20'})

    def test_noiseless_with_explicit_radius(self):
        cfg = config.parse_config(overrides={'snr_db': 'inf', 'rho': '0.1'})
        assert cfg.system().sigma == 0.0
        assert cfg.kernel_rho() == 0.1

    def test_crosses_process_boundary(self):
        """Configs and their errors are sent to and from worker processes."""
        cfg = config.parse_config(preset='desk')
        assert pickle.loads(pickle.dumps(cfg)) == cfg
        error = pickle.loads(pickle.dumps(ConfigurationError('B: too many', 'B')))
        assert (str(error), error.field) == ('B: too many', 'B')

    def test_noiseless_lms_needs_no_radius(self):
        cfg = config.parse_config(overrides={'snr_db': 'inf', 'receivers': 'full-lms'})
        assert cfg.receivers == ('full-lms',)


class TestParsing:
    """Tests for key = value files and overrides."""

    def test_unknown_key(self):
        with pytest.raises(ConfigurationError, match="unknown configuration key") as info:
            config.parse_config(overrides={'antennas': '4'})
        assert info.value.field == 'antennas'

    def test_bad_value(self):
        with pytest.raises(ConfigurationError, match="invalid value"):
            config.parse_config(overrides={'M': 'forty'})
        with pytest.raises(ConfigurationError, match="invalid value"):
            config.parse_config(overrides={'baseline_adaptive_mu': 'maybe'})

    def test_file_then_overrides(self, tmp_path):
        path = tmp_path / 'run.cfg'
        path.write_text('# desk variant\nK = 3  # users\ntrials = 7\nreceivers = jidf-mber, full-nlms\n')
        cfg = config.parse_config(str(path), preset='desk', overrides={'trials': 9})
        assert cfg.K == 3
        assert cfg.M == 16
        assert cfg.trials == 9
        assert cfg.receivers == ('jidf-mber', 'full-nlms')

    def test_malformed_line(self, tmp_path):
        path = tmp_path / 'bad.cfg'
        path.write_text('K 3\n')
        with pytest.raises(ConfigurationError, match="expected"):
            config.parse_config(str(path))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError, match="cannot read config file") as info:
            config.parse_config(str(tmp_path / 'absent.cfg'))
        assert info.value.field == 'config'

    def test_lists_and_flags(self):
        cfg = config.parse_config(overrides={'k_list': '1, 2,3', 'snr_list': '0,7.5',
            'baseline_adaptive_mu': 'yes', 'rho': 'auto'})
        assert cfg.k_list == (1, 2, 3)
        assert cfg.snr_list == (0.0, 7.5)
        assert cfg.baseline_adaptive_mu is True
        assert cfg.rho is None

    def test_manifest_round_trip(self, tmp_path):
        cfg = config.parse_config(preset='desk', overrides={'rho': '0.5', 'receivers': 'jidf-mber,full-nlms',
            'snr_list': '1.5,3', 'amplitudes': '1,0.5', 'fdT': '1e-3', 'seed': '42'})
        path = tmp_path / 'manifest.txt'
        path.write_text('# header\n' + '\n'.join(cfg.to_lines()) + '\n# seed = 42\n')
        assert config.parse_config(str(path)) == cfg

    def test_threads_from_environment(self, monkeypatch):
        monkeypatch.setenv(config.THREADS_ENV, '3')
        assert config.parse_config().threads == 3
        assert config.parse_config(overrides={'threads': 2}).threads == 2
        monkeypatch.setenv(config.THREADS_ENV, 'many')
        assert config.parse_config().threads == 1


class TestGrid:
    """Tests for the sweep grid."""

    def test_symbols(self):
        cfg = ExperimentConfig()
        assert cfg.grid() == [(None, cfg)]

    def test_users(self):
        cfg = replace(ExperimentConfig(), sweep='users', k_list=(2, 3))
        assert [(x, point.K) for x, point in cfg.grid()] == [(2, 2), (3, 3)]

    def test_snr(self):
        cfg = replace(ExperimentConfig(), sweep='snr', snr_list=(0.0, 10.0))
        points = cfg.grid()
        assert [point.snr_db for _, point in points] == [0.0, 10.0]
        assert points[0][1].system().sigma > points[1][1].system().sigma
        assert np.isclose(points[1][1].system().sigma ** 2, 2 / 10)

    def test_branches(self):
        cfg = replace(ExperimentConfig(), sweep='branches', b_list=(1, 3))
        points = cfg.grid()
        assert [(x, point.B) for x, point in points] == [(1, 1), (3, 3)]
        assert all(point.K == cfg.K and point.M == cfg.M for _, point in points)

    def test_branches_from_text(self):
        cfg = config.parse_config(preset='desk', overrides={'sweep': 'branches', 'b_list': '1,2,4'})
        assert cfg.b_list == (1, 2, 4)
        assert [point.B for _, point in cfg.grid()] == [1, 2, 4]

    @pytest.mark.parametrize("b_list", ['1,5', '0,1', ''])
    def test_branches_checks_every_point(self, b_list):
        """Desk scale fits at most floor(16/4) = 4 shifted patterns."""
        with pytest.raises(ConfigurationError) as info:
            config.parse_config(preset='desk', overrides={'sweep': 'branches', 'b_list': b_list})
        assert info.value.field == 'b_list'

    def test_b_list_ignored_by_other_sweeps(self):
        cfg = config.parse_config(preset='desk', overrides={'b_list': '1,9'})
        assert cfg.B == 2
