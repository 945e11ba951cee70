#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Experiment configuration: defaults, presets and flat key = value files.

Resolution order is preset < config file < overrides (command line). A run
manifest is a valid config file, the run metadata is written as comments.
"""

import os
from dataclasses import dataclass, fields, replace

import baselines
import jidf
import log
import mber
import receivers
from errors import ArgumentError, ConfigurationError
from signal_model import N_OSCILLATORS, SystemConfig

ARTIFACT_VERSION = '0.1.0'
THREADS_ENV = 'JIDF_THREADS'

MBER_RECEIVERS = ('jidf-mber', 'full-mber')
SWEEPS = ('symbols', 'users', 'snr', 'branches')

logger = log.getLogger('config')


@dataclass(frozen=True)
class ExperimentConfig:
    """All tunables of one run. Defaults are the full-scale operating point (M=40)."""
    # system
    K: int = 4
    N_U: int = 2
    M: int = 40
    amplitudes: tuple = ()          # empty means A_k = 1 for every user
    snr_db: float = 15.0
    fdT: float = 1e-5
    n_oscillators: int = N_OSCILLATORS
    desired_user: int = 0
    desired_stream: int = 0
    # receivers
    receivers: tuple = ('jidf-mber', 'full-lms', 'full-mber')
    D: int = 8
    I: int = 8
    B: int = 4
    rho: float = None               # None means 2 sigma
    delta1: float = mber.DELTA1
    delta2: float = mber.DELTA2
    mu_max: float = mber.MU_MAX
    mu_min: float = mber.MU_MIN
    mu_init: float = mber.MU_MAX
    mu_lms: float = baselines.MU_LMS
    mu_mber: float = baselines.MU_MBER
    mu_reduced_rank: float = baselines.MU_REDUCED_RANK
    baseline_adaptive_mu: bool = False
    # schedule and grid
    tr_length: int = 200
    dd_length: int = 1000
    sweep: str = 'symbols'
    k_list: tuple = (4, 6, 8, 10, 12, 14, 16)
    snr_list: tuple = (0.0, 5.0, 10.0, 15.0, 20.0)
    b_list: tuple = (1, 2, 3, 4)
    trials: int = 200
    seed: int = 1
    threads: int = 1

    @property
    def n_symbols(self):
        return self.tr_length + self.dd_length

    @property
    def steady_window(self):
        """Final 25% of the DD symbols (of all symbols when there is no DD phase)."""
        span = self.dd_length if self.dd_length > 0 else self.n_symbols
        return max(1, span // 4)

    def at(self, K=None, snr_db=None, B=None):
        """Same config at another grid point."""
        return replace(self, K=self.K if K is None else K,
            snr_db=self.snr_db if snr_db is None else snr_db, B=self.B if B is None else B)

    def grid(self):
        """List of (x, point config) for the configured sweep."""
        if self.sweep == 'users':
            return [(k, self.at(K=k)) for k in self.k_list]
        if self.sweep == 'snr':
            return [(snr, self.at(snr_db=snr)) for snr in self.snr_list]
        if self.sweep == 'branches':
            return [(b, self.at(B=b)) for b in self.b_list]
        return [(None, self)]

    def system(self):
        amplitudes = self.amplitudes if self.amplitudes else None
        return SystemConfig.from_snr(self.K, self.N_U, self.M, self.snr_db, self.fdT, amplitudes)

    def kernel_rho(self, system=None):
        system = system if system is not None else self.system()
        return self.rho if self.rho is not None else 2 * system.sigma

    def step_controller(self):
        return mber.StepSizeController(mu=self.mu_init, delta1=self.delta1, delta2=self.delta2,
            mu_plus=self.mu_max, mu_minus=self.mu_min)

    def validate(self):
        """Raises ConfigurationError naming the first offending field."""
        def check(condition, field, message):
            if not condition:
                raise ConfigurationError('%s: %s' % (field, message), field)

        check(self.tr_length >= 0 and self.dd_length >= 0, 'tr_length', 'lengths must be >= 0')
        check(self.n_symbols >= 1, 'dd_length', 'TR + DD must be >= 1')
        check(self.trials >= 1, 'trials', 'at least one trial is required')
        check(self.threads >= 1, 'threads', 'at least one worker is required')
        check(self.seed >= 0, 'seed', 'base seed must be >= 0')
        check(1 <= self.D <= self.M, 'D', 'rank D=%d must lie in [1, M=%d]' % (self.D, self.M))
        check(1 <= self.I < self.M, 'I', 'interpolator length I=%d must lie in [1, M=%d)' % (self.I, self.M))
        bs = self.b_list if self.sweep == 'branches' else (self.B,)
        check(len(bs) >= 1 and min(bs) >= 1, 'B' if self.sweep != 'branches' else 'b_list',
            'at least one branch is required')
        check(self.n_oscillators >= 1, 'n_oscillators', 'at least one oscillator is required')
        check(self.sweep in SWEEPS, 'sweep', 'unknown sweep %r (one of %s)' % (self.sweep, ', '.join(SWEEPS)))
        check(len(self.receivers) >= 1, 'receivers', 'no receiver selected')
        for name in self.receivers:
            check(name in receivers.RECEIVERS, 'receivers', 'unknown receiver %r (one of %s)'
                % (name, ', '.join(receivers.RECEIVERS)))
        check(0 < self.delta1 <= 1, 'delta1', 'must lie in (0, 1]')
        check(0 < self.mu_min <= self.mu_init <= self.mu_max, 'mu_init',
            'need 0 < mu_min <= mu_init <= mu_max')
        check(self.rho is None or self.rho > 0, 'rho', 'kernel radius must be positive')
        try:
            jidf.decimation_pattern(max(bs), self.M, self.D)
        except ArgumentError as e:
            field = 'b_list' if self.sweep == 'branches' else 'B'
            raise ConfigurationError('%s: %s' % (field, e), field)
        ks = self.k_list if self.sweep == 'users' else (self.K,)
        snrs = self.snr_list if self.sweep == 'snr' else (self.snr_db,)
        check(len(ks) >= 1 and len(snrs) >= 1, 'sweep', 'empty grid')
        check(self.amplitudes == () or len(ks) == 1, 'amplitudes',
            'per-user amplitudes cannot be combined with a user sweep')
        for k in ks:
            for snr in snrs:
                system = self.at(K=k, snr_db=snr).system()
                check(self.desired_user < k, 'desired_user', 'user %d does not exist for K=%d'
                    % (self.desired_user, k))
                if self.baseline_adaptive_mu or any(name in MBER_RECEIVERS for name in self.receivers):
                    check(self.kernel_rho(system) > 0, 'rho',
                        'sigma = 0 requires an explicit kernel radius')
        check(0 <= self.desired_stream < self.N_U, 'desired_stream', 'stream %d does not exist for N_U=%d'
            % (self.desired_stream, self.N_U))
        return self

    def to_lines(self):
        return ['%s = %s' % (f.name, _format(getattr(self, f.name))) for f in fields(self)]


PRESETS = {
    'paper': {},
    'desk': dict(M=16, K=2, D=4, I=4, B=2, k_list=(1, 2, 3, 4)),
}


################################################################################
# key = value parsing

def _bool(text):
    lowered = text.lower()
    if lowered in ('1', 'true', 'yes', 'on'):
        return True
    if lowered in ('0', 'false', 'no', 'off'):
        return False
    raise ValueError('not a boolean: %r' % text)


def _tuple_of(kind):
    def parse(text):
        return tuple(kind(item.strip()) for item in text.split(',') if item.strip())
    return parse


def _optional_float(text):
    return None if text.lower() in ('auto', 'none', '') else float(text)


_PARSERS = {
    'amplitudes': _tuple_of(float),
    'receivers': _tuple_of(str),
    'k_list': _tuple_of(int),
    'snr_list': _tuple_of(float),
    'b_list': _tuple_of(int),
    'rho': _optional_float,
    'baseline_adaptive_mu': _bool,
    'sweep': str,
}


def _parser_for(field):
    if field.name in _PARSERS:
        return _PARSERS[field.name]
    return type(field.default)


def _format(value):
    if value is None:
        return 'auto'
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, tuple):
        return ','.join(_format(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def parse_values(pairs):
    """Converts {key: text} into typed values, rejecting unknown keys."""
    known = {f.name: f for f in fields(ExperimentConfig)}
    values = {}
    for key, text in pairs.items():
        if key not in known:
            raise ConfigurationError('unknown configuration key %r' % key, key)
        try:
            values[key] = _parser_for(known[key])(text.strip())
        except ValueError as e:
            raise ConfigurationError('%s: invalid value %r (%s)' % (key, text, e), key)
    return values


def read_config_file(path):
    """Reads 'key = value' lines; '#' starts a comment."""
    pairs = {}
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            line = line.split('#', 1)[0].strip()
            if not line:
                continue
            if '=' not in line:
                raise ConfigurationError('%s:%d: expected "key = value", got %r' % (path, lineno, line))
            key, value = line.split('=', 1)
            pairs[key.strip()] = value
    return pairs


def default_threads():
    text = os.environ.get(THREADS_ENV)
    if not text:
        return 1
    try:
        return max(1, int(text))
    except ValueError:
        logger.warning('ignoring %s=%r (not an integer)' % (THREADS_ENV, text))
        return 1


def parse_config(path=None, preset=None, overrides=None):
    """Resolves preset defaults, then the config file, then overrides.

    'overrides' - {key: text or value}; text values are parsed like file values
    """
    values = {'threads': default_threads()}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigurationError('unknown preset %r (one of %s)' % (preset, ', '.join(PRESETS)), 'preset')
        values.update(PRESETS[preset])
    if path is not None:
        try:
            values.update(parse_values(read_config_file(path)))
        except OSError as e:
            raise ConfigurationError('cannot read config file %s: %s' % (path, e.strerror), 'config')
    if overrides:
        known = {f.name for f in fields(ExperimentConfig)}
        for key, value in overrides.items():
            if key not in known:
                raise ConfigurationError('unknown configuration key %r' % key, key)
        values.update(parse_values({k: v for k, v in overrides.items() if isinstance(v, str)}))
        values.update({k: v for k, v in overrides.items() if not isinstance(v, str)})
    cfg = ExperimentConfig(**values)
    logger.debug('resolved configuration: %s' % ', '.join(cfg.to_lines()))
    return cfg.validate()
