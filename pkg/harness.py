#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Seeded Monte Carlo trials and BER curves.

Trial t of grid point j always uses the seed sequence spawned from
(base seed, j, t), so results do not depend on the number of worker processes
nor on the order in which trials finish. All receivers of one trial see the
same symbols, channel and noise.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np
import scipy.stats
from tqdm import tqdm

import log
import receivers
from signal_model import SignalSource

logger = log.getLogger('harness')

CONFIDENCE = 0.95
AXES = {'symbols': 'symbol', 'users': 'K', 'snr': 'snr_db', 'branches': 'B'}


@dataclass(frozen=True)
class TrialRecord:
    """Per-symbol traces of one receiver over one trial (TR + DD symbols).

    'errors' - 1 where the emitted decision differs from the transmitted symbol
    'branch' - selected branch (1-based), 0 for full-rank receivers
    'mu_w' - step size of the (reduced-rank or full-rank) filter
    'mu_p' - per-branch interpolator step sizes, shape (n_symbols, B)
    'constraint_error' - max_l |g(p_l) - 1| after each symbol
    'diverged' - a full-rank filter produced non-finite weights at some point
    """
    receiver: str
    errors: np.ndarray
    branch: np.ndarray
    mu_w: np.ndarray
    mu_p: np.ndarray
    constraint_error: np.ndarray
    diverged: bool = False

    def __len__(self):
        return self.errors.size

    @property
    def n_errors(self):
        return int(self.errors.sum())


@dataclass(frozen=True)
class BERCurve:
    """Mean BER of one receiver along the sweep axis with binomial confidence half-widths.

    'diverged' - number of trials with a diverged filter, per grid point
    """
    receiver: str
    axis: str
    x: np.ndarray
    ber: np.ndarray
    ci_halfwidth: np.ndarray
    trials: int
    diverged: np.ndarray = None

    def __len__(self):
        return self.x.size


def trial_seed(base_seed, point_index, trial_index):
    return np.random.SeedSequence(base_seed, spawn_key=(point_index, trial_index))


def _run_receivers(cfg, seed, names):
    system = cfg.system()
    rng = np.random.default_rng(seed)
    source = SignalSource(system, rng, cfg.n_oscillators)
    rcvs = [receivers.make_receiver(name, cfg, system) for name in names]
    n = cfg.n_symbols
    traces = [dict(errors=np.zeros(n, dtype=np.int8), branch=np.zeros(n, dtype=np.int64),
        mu_w=np.zeros(n), mu_p=np.zeros((n, rcv.n_branches)), constraint_error=np.zeros(n))
        for rcv in rcvs]

    for i in range(n):
        b, r = next(source)
        desired = b[cfg.desired_user, cfg.desired_stream]
        for rcv, trace in zip(rcvs, traces):
            obs = rcv.step(r, desired)
            trace['errors'][i] = obs.decision != desired
            trace['branch'][i] = obs.branch
            trace['mu_w'][i] = obs.mu_w
            trace['mu_p'][i] = obs.mu_p
            trace['constraint_error'][i] = obs.constraint_error

    return [TrialRecord(receiver=name, diverged=getattr(rcv, 'diverged', False), **trace)
        for name, rcv, trace in zip(names, rcvs, traces)]


def run_trial(cfg, seed, receiver=None):
    """One full TR + DD pass of a single receiver.

    'seed' - int or numpy SeedSequence
    'receiver' - receiver name, the first configured receiver by default
    """
    cfg.validate()
    name = receiver if receiver is not None else cfg.receivers[0]
    record, = _run_receivers(cfg, seed, [name])
    return record


def run_trials(cfg, point_index=0, names=None):
    """Runs cfg.trials trials of every receiver at one grid point.

    return - {receiver name: list of TrialRecords in trial order}
    """
    cfg.validate()
    names = list(names if names is not None else cfg.receivers)
    seeds = [trial_seed(cfg.seed, point_index, t) for t in range(cfg.trials)]
    task = partial(_run_receivers, cfg, names=names)
    progress = partial(tqdm, total=len(seeds), unit='trial', leave=False,
        desc='K=%d, B=%d, %.1f dB' % (cfg.K, cfg.B, cfg.snr_db), disable=log.getLevel() > logging.INFO)
    if cfg.threads > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as executor:
            results = list(progress(executor.map(task, seeds)))
    else:
        results = list(progress(map(task, seeds)))
    n_diverged = {name: 0 for name in names}
    for records in results:
        for record in records:
            n_diverged[record.receiver] += record.diverged
    for name, count in n_diverged.items():
        if count:
            logger.warning('%s diverged in %d of %d trials' % (name, count, cfg.trials))
    return {name: [records[i] for records in results] for i, name in enumerate(names)}


################################################################################
# aggregation

def binomial_halfwidth(ber, n):
    """Normal-approximation half-width of the 95% interval of a proportion from n Bernoulli draws."""
    z = scipy.stats.norm.ppf(0.5 + CONFIDENCE / 2)
    ber = np.asarray(ber, dtype=float)
    return z * np.sqrt(ber * (1 - ber) / n)


def error_counts(records):
    """Per-symbol error counts summed over trials."""
    return np.sum([record.errors for record in records], axis=0, dtype=np.int64)


def window_ber(records, start, stop):
    """(BER, half-width, number of decisions) over symbols [start, stop) of every trial."""
    counts = error_counts(records)[start:stop]
    n = counts.size * len(records)
    ber = counts.sum() / n
    return float(ber), float(binomial_halfwidth(ber, n)), n


def steady_state_ber(records, window):
    """BER over the final 'window' symbols of every trial."""
    n_symbols = len(records[0])
    return window_ber(records, n_symbols - window, n_symbols)


def diverged_count(records):
    return sum(record.diverged for record in records)


def symbol_curve(name, records):
    """BER versus symbol index 1 ... n, averaged over trials."""
    ber = error_counts(records) / len(records)
    x = np.arange(1, ber.size + 1)
    return BERCurve(name, AXES['symbols'], x, ber, binomial_halfwidth(ber, len(records)), len(records),
        np.array([diverged_count(records)]))


def ber_curve(cfg):
    """Runs the configured sweep and returns one BERCurve per receiver.

    The symbols sweep gives BER per symbol index; the users and snr sweeps give
    the steady-state BER (final cfg.steady_window symbols) per grid point,
    and so does the branches sweep over the MBER-JIDF branch count B.
    """
    cfg.validate()
    grid = cfg.grid()
    points = {name: [] for name in cfg.receivers}
    for j, (x, point) in enumerate(grid):
        logger.info('grid point %d/%d: K=%d, B=%d, SNR=%.1f dB, %d trials'
            % (j + 1, len(grid), point.K, point.B, point.snr_db, point.trials))
        records = run_trials(point, j)
        if x is None:
            return tuple(symbol_curve(name, records[name]) for name in cfg.receivers)
        for name in cfg.receivers:
            ber, halfwidth, _ = steady_state_ber(records[name], point.steady_window)
            logger.info('  %-10s steady-state BER %.4g +- %.2g' % (name, ber, halfwidth))
            points[name].append((x, ber, halfwidth, diverged_count(records[name])))

    curves = []
    for name, rows in points.items():
        x, ber, halfwidth, diverged = (np.array(column) for column in zip(*rows))
        curves.append(BERCurve(name, AXES[cfg.sweep], x, ber, halfwidth, cfg.trials, diverged))
    return tuple(curves)
