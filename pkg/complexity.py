#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Arithmetic operation counts per received symbol.

Multiplications and additions per symbol for each algorithm, evaluated from
closed-form formulas. EIG is an O(M^3) method and is counted as M^3 for both.
The MBER-MWF multiplication formula gives 15474 at M=40, D=8; the commonly
quoted figure for that point is 15594. The formula is kept as printed.
"""

import jidf
from errors import ArgumentError

ALGORITHMS = ('Full-Rank-LMS', 'Full-Rank-MBER', 'EIG', 'MBER-MWF', 'MBER-JIDF')

_ALIASES = {
    'full-rank-lms': 'Full-Rank-LMS',
    'full-lms': 'Full-Rank-LMS',
    'lms': 'Full-Rank-LMS',
    'full-rank-mber': 'Full-Rank-MBER',
    'full-mber': 'Full-Rank-MBER',
    'eig': 'EIG',
    'mber-mwf': 'MBER-MWF',
    'mwf-mber': 'MBER-MWF',
    'mber-jidf': 'MBER-JIDF',
    'jidf-mber': 'MBER-JIDF',
}


def canonical_label(alg):
    try:
        return _ALIASES[alg.strip().lower()]
    except (KeyError, AttributeError):
        raise ArgumentError('unknown algorithm %r (one of %s)' % (alg, ', '.join(ALGORITHMS)))


def psi_sum_bound(I, B, D):
    """Upper bound I*B*D of the sum of psi_j over all columns of all branches."""
    return I * B * D


def measured_psi_sum(M, D, I, B):
    """Sum of psi_j over the columns of the B deterministic branches."""
    total = 0
    for l in range(1, B + 1):
        _, psi = jidf.structural_counts(jidf.decimation_pattern(l, M, D), I)
        total += int(psi.sum())
    return total


def _full_rank_lms(M, D, I, B, psi_sum):
    return 2 * M + 1, 2 * M


def _full_rank_mber(M, D, I, B, psi_sum):
    return 4 * M + 1, 4 * M - 1


def _eig(M, D, I, B, psi_sum):
    return M ** 3, M ** 3


def _mber_mwf(M, D, I, B, psi_sum):
    mults = (D + 1) * M ** 2 + (3 * D + 1) * M + M + 3 * D + 10
    adds = (D - 1) * M ** 2 + (2 * D - 1) * M + M + 2 * D + 1
    return mults, adds


def _mber_jidf(M, D, I, B, psi_sum):
    mults = M * D * B + D * B + 7 * I * B + 4 * D + 1 + psi_sum
    adds = M * D * B + I * B - B + 4 * D - 1 + psi_sum
    return mults, adds


_FORMULAS = {
    'Full-Rank-LMS': (_full_rank_lms, ('M',)),
    'Full-Rank-MBER': (_full_rank_mber, ('M',)),
    'EIG': (_eig, ('M',)),
    'MBER-MWF': (_mber_mwf, ('M', 'D')),
    'MBER-JIDF': (_mber_jidf, ('M', 'D', 'I', 'B')),
}


def complexity_count(alg, M, D=None, I=None, B=None, psi_sum=None):
    """(multiplications, additions) per symbol of algorithm 'alg'.

    'psi_sum' - sum of psi_j over columns and branches (MBER-JIDF only),
                the bound I*B*D when omitted
    """
    label = canonical_label(alg)
    formula, required = _FORMULAS[label]
    params = dict(M=M, D=D, I=I, B=B)
    for name in required:
        if params[name] is None or params[name] < 1:
            raise ArgumentError('%s needs a positive %s (got %r)' % (label, name, params[name]))
    if label == 'MBER-JIDF':
        if psi_sum is None:
            psi_sum = psi_sum_bound(I, B, D)
        if psi_sum < 0:
            raise ArgumentError('psi_sum must be >= 0 (got %r)' % psi_sum)
    return formula(M, D, I, B, psi_sum)


def complexity_table(cfg):
    """Rows (label, mults, adds) for every algorithm at the configured M, D, I, B.

    MBER-JIDF appears twice: with the I*B*D bound and, as MBER-JIDF-measured,
    with the psi sum of the actual patterns.
    """
    rows = []
    for label in ALGORITHMS:
        rows.append((label,) + complexity_count(label, cfg.M, cfg.D, cfg.I, cfg.B))
    psi_sum = measured_psi_sum(cfg.M, cfg.D, cfg.I, cfg.B)
    rows.append(('MBER-JIDF-measured',) + complexity_count('MBER-JIDF', cfg.M, cfg.D, cfg.I, cfg.B, psi_sum))
    return rows
