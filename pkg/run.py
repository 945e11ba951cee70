#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import sys
import argparse

import config
import complexity
import export
import gradcheck
import log
from errors import SimulationError

################################################################################

logger = log.getLogger('run_script')

DEFAULTS = {
    'out': 'results',
    'gradcheck-instances': 100,
}

parser = argparse.ArgumentParser(
    description='MBER-JIDF reduced-rank MIMO receiver simulator')
parser.add_argument('-v', '--verbose', action='count', default=0,
    help='Increase verbosity WARN -> INFO -> DEBUG (for each usage of this argument)')
parser.add_argument('-c', '--config', metavar='FILE',
    help='Configuration file with "key = value" lines (a run manifest works too)')
parser.add_argument('-p', '--preset', choices=sorted(config.PRESETS),
    help='Named preset used as the base configuration (default: paper)')
parser.add_argument('-o', '--out', default=DEFAULTS['out'],
    help='Output directory for CSV files and the manifest')
parser.add_argument('-s', '--seed', type=int,
    help='Base seed of the trial seed sequence')
parser.add_argument('-t', '--trials', type=int,
    help='Number of Monte Carlo trials per grid point')
parser.add_argument('-j', '--threads', type=int,
    help='Number of worker processes (default: $%s or 1)' % config.THREADS_ENV)
parser.add_argument('-S', '--set', action='append', default=[], metavar='KEY=VALUE',
    help='Override any configuration key, may be given multiple times')
parser.add_argument('command', nargs='?', default='run',
    choices=['run', 'complexity', 'gradcheck', 'presets'],
    help='run: BER experiment, complexity: operation counts only, '
         'gradcheck: finite-difference check of the gradients, presets: list named configurations')
parser.add_argument('-n', '--instances', type=int, default=DEFAULTS['gradcheck-instances'],
    help='Number of random instances for gradcheck')


def overrides_from(args):
    overrides = {}
    for item in args.set:
        if '=' not in item:
            parser.error('--set expects KEY=VALUE, got %r' % item)
        key, value = item.split('=', 1)
        overrides[key.strip()] = value
    for key in ('seed', 'trials', 'threads'):
        value = getattr(args, key)
        if value is not None:
            overrides[key] = value
    return overrides


def show_presets():
    for name in sorted(config.PRESETS):
        cfg = config.parse_config(preset=name)
        print('%s: M=%d, K=%d, N_U=%d, D=%d, I=%d, B=%d, SNR=%.1f dB, fdT=%g, trials=%d'
            % (name, cfg.M, cfg.K, cfg.N_U, cfg.D, cfg.I, cfg.B, cfg.snr_db, cfg.fdT, cfg.trials))


def show_complexity(cfg):
    rows = complexity.complexity_table(cfg)
    width = max(len(label) for label, _, _ in rows)
    print('{:<{w}}  {:>12}  {:>12}'.format('algorithm', 'mults', 'adds', w=width))
    for label, mults, adds in rows:
        print('{:<{w}}  {:>12d}  {:>12d}'.format(label, mults, adds, w=width))


def main(argv=None):
    args = parser.parse_args(argv)

    # configure verbosity
    log.setLevel(log.verbosity_to_level(args.verbose))

    try:
        if args.command == 'presets':
            show_presets()
            return 0

        if args.command == 'gradcheck':
            report = gradcheck.run(n_instances=args.instances, seed=args.seed if args.seed is not None else 0)
            print('gradcheck: %d instances, max relative error w %.2e, p %.2e -> %s'
                % (report.n_instances, report.max_error_w, report.max_error_p,
                   'PASS' if report.passed else 'FAIL'))
            return 0 if report.passed else 1

        cfg = config.parse_config(args.config, args.preset, overrides_from(args))

        if args.command == 'complexity':
            show_complexity(cfg)
            return 0

        logger.info('Running %s sweep with %s, %d trials per point on %d worker(s)'
            % (cfg.sweep, ', '.join(cfg.receivers), cfg.trials, cfg.threads))
        manifest = export.run_and_export(cfg, args.out)
        for path in manifest.paths:
            print(path)
        return 0
    except SimulationError as e:
        logger.error('%s' % e)
        return 2


if __name__ == '__main__':
    sys.exit(main())
