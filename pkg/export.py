#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Writes BER curves, the complexity table and the run manifest."""

import os
import time
from dataclasses import dataclass

import numpy as np

import complexity
import config
import harness
import log
from errors import ExportError

logger = log.getLogger('export')

CURVE_HEADER = 'x,ber,ci_halfwidth,trials'
COMPLEXITY_HEADER = 'algorithm,mults,adds'
MANIFEST_NAME = 'manifest.txt'
COMPLEXITY_NAME = 'complexity.csv'
SNR_DEFINITION = '10 log10(N_U A_1^2 / sigma^2)'


@dataclass(frozen=True)
class RunManifest:
    """Everything needed to repeat a run; 'cfg' alone reproduces the outputs.

    'diverged' - ((receiver, trials with a diverged filter per grid point), ...)
    """
    cfg: config.ExperimentConfig
    seed: int
    version: str
    duration: float
    paths: tuple
    diverged: tuple = ()

    def to_lines(self):
        lines = ['# jidf-mber-sim run manifest, valid as a config file']
        lines += self.cfg.to_lines()
        lines.append('# version = %s' % self.version)
        lines.append('# seed = %d' % self.seed)
        lines.append('# snr_definition = %s' % SNR_DEFINITION)
        lines.append('# duration_s = %.3f' % self.duration)
        lines += ['# output = %s' % os.path.basename(path) for path in self.paths]
        lines += ['# diverged_%s = %s of %d trials' % (name, ','.join(str(n) for n in counts), self.cfg.trials)
            for name, counts in self.diverged]
        return lines


def curve_path(out_dir, curve, sweep):
    return os.path.join(out_dir, 'ber_%s_%s.csv' % (curve.receiver, sweep))


def write_curve(path, curve):
    table = np.column_stack([curve.x, curve.ber, curve.ci_halfwidth, np.full(len(curve), curve.trials)])
    np.savetxt(path, table, fmt=['%.10g', '%.10g', '%.10g', '%d'], delimiter=',',
        header=CURVE_HEADER, comments='')


def write_complexity(path, rows):
    np.savetxt(path, np.array(rows, dtype=object), fmt='%s', delimiter=',',
        header=COMPLEXITY_HEADER, comments='')


def write_manifest(path, manifest):
    with open(path, 'w') as f:
        f.write('\n'.join(manifest.to_lines()) + '\n')


def _remove(paths):
    for path in paths:
        if os.path.isfile(path):
            os.remove(path)


def run_and_export(cfg, out_dir):
    """Runs the configured sweep and writes one CSV per curve, complexity.csv and manifest.txt.

    On any I/O failure the files written so far are removed and ExportError
    naming the failing path is raised.
    """
    cfg.validate()
    start = time.time()
    curves = harness.ber_curve(cfg)
    rows = complexity.complexity_table(cfg)

    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as e:
        raise ExportError('cannot create output directory %s: %s' % (out_dir, e.strerror), out_dir)

    written = []
    path = out_dir
    try:
        for curve in curves:
            path = curve_path(out_dir, curve, cfg.sweep)
            written.append(path)
            write_curve(path, curve)
        path = os.path.join(out_dir, COMPLEXITY_NAME)
        written.append(path)
        write_complexity(path, rows)
        diverged = tuple((curve.receiver, tuple(int(n) for n in curve.diverged)) for curve in curves)
        manifest = RunManifest(cfg, cfg.seed, config.ARTIFACT_VERSION, time.time() - start, tuple(written),
            diverged)
        path = os.path.join(out_dir, MANIFEST_NAME)
        written.append(path)
        write_manifest(path, manifest)
    except OSError as e:
        _remove(written)
        raise ExportError('cannot write %s: %s' % (path, e.strerror or e), path)

    logger.info('wrote %d files to %s in %.1f s' % (len(written), out_dir, manifest.duration))
    return manifest
