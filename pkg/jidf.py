#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Joint interpolation and decimation: the per-branch dimensionality reduction.

Branch l maps the received vector r (length M) to D samples

    rbar_l = T_l P_l^H r = T_l R' conj(p_l)

where P_l is the M x M banded Toeplitz convolution matrix of the I-tap
interpolator p_l, R' is the zero-padded M x I Hankel matrix of r and T_l keeps
the rows at offsets q_{l,1} < ... < q_{l,D}. Decimation is stored as offsets only.
"""

import itertools
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg

import log
from errors import ArgumentError

_logger = log.getLogger('jidf')

ORACLE_MAX_M = 8
ORACLE_MAX_D = 3


def _frozen(array, dtype):
    array = np.array(array, dtype=dtype)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class Interpolator:
    """I interpolation taps p_1 ... p_I of branch 'l' (1-based)."""
    p: np.ndarray
    l: int = 1

    def __post_init__(self):
        p = _frozen(self.p, np.complex128).ravel()
        if p.size < 1:
            raise ArgumentError('interpolator needs at least one tap')
        if not np.all(np.isfinite(p)):
            raise ArgumentError('interpolator taps of branch %d are not finite' % self.l)
        object.__setattr__(self, 'p', p)

    @property
    def I(self):
        return self.p.size

    @classmethod
    def unit_impulse(cls, I, l=1):
        p = np.zeros(I, dtype=np.complex128)
        p[0] = 1
        return cls(p, l)


@dataclass(frozen=True)
class DecimationPattern:
    """Row selection T_l given by the D offsets q (number of zeros before each 1).

    Patterns from decimation_pattern() have strictly increasing offsets; the
    exhaustive oracle also builds patterns in any row order.
    """
    offsets: np.ndarray
    M: int
    l: int = 1

    def __post_init__(self):
        q = _frozen(self.offsets, np.int64).ravel()
        if q.size < 1 or q.size > self.M:
            raise ArgumentError('pattern must select between 1 and M=%d rows, got %d' % (self.M, q.size))
        if q.min() < 0 or q.max() > self.M - 1:
            raise ArgumentError('offsets %s outside [0, %d]' % (q.tolist(), self.M - 1))
        if np.unique(q).size != q.size:
            raise ArgumentError('offsets %s select a row twice' % q.tolist())
        object.__setattr__(self, 'offsets', q)

    @property
    def D(self):
        return self.offsets.size

    @property
    def is_ordered(self):
        return bool(np.all(np.diff(self.offsets) > 0))

    def dense(self):
        """D x M selection matrix (tests only)."""
        T = np.zeros((self.D, self.M))
        T[np.arange(self.D), self.offsets] = 1
        return T


@dataclass(frozen=True)
class BranchState:
    """Interpolator and decimation pattern of one branch with cached counts.

    'phi' - structural nonzeros per row of T_l R' (length D)
    'psi' - structural nonzeros per column of T_l R' (length I)
    """
    interpolator: Interpolator
    pattern: DecimationPattern
    phi: np.ndarray = field(default=None, repr=False)
    psi: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.interpolator.I >= self.pattern.M:
            raise ArgumentError('interpolator length I=%d must be < M=%d'
                % (self.interpolator.I, self.pattern.M))
        if self.phi is None or self.psi is None:
            phi, psi = structural_counts(self.pattern, self.interpolator.I)
            object.__setattr__(self, 'phi', phi)
            object.__setattr__(self, 'psi', psi)

    @property
    def l(self):
        return self.pattern.l

    @property
    def p(self):
        return self.interpolator.p

    @property
    def overlapping(self):
        """True when neighbouring rows of T_l R' share taps, i.e. g_value() drops cross terms."""
        return bool(np.any(np.abs(np.diff(self.pattern.offsets)) < self.interpolator.I))

    def with_taps(self, p):
        """Same branch with new interpolator taps (counts are reused)."""
        return replace(self, interpolator=Interpolator(p, self.interpolator.l))


def make_branch(l, M, D, I, p=None):
    """Branch l with the deterministic pattern and (by default) unit-impulse taps."""
    interpolator = Interpolator.unit_impulse(I, l) if p is None else Interpolator(p, l)
    return BranchState(interpolator, decimation_pattern(l, M, D))


################################################################################

def hankel_from_received(r, I):
    """M x I zero-padded Hankel matrix, R'[m, j] = r[m + j] (0 past index M-1)."""
    r = np.asarray(r, dtype=np.complex128).ravel()
    M = r.size
    if not 1 <= I <= M:
        raise ArgumentError('Hankel order I=%d outside [1, M=%d]' % (I, M))
    last_row = np.zeros(I, dtype=np.complex128)
    last_row[0] = r[-1]
    return scipy.linalg.hankel(r, last_row)


def toeplitz_interp_matrix(p, M):
    """M x M banded lower-triangular convolution matrix P (column c holds the taps from row c)."""
    p = p.p if isinstance(p, Interpolator) else np.asarray(p, dtype=np.complex128).ravel()
    if p.size > M:
        raise ArgumentError('interpolator length I=%d exceeds M=%d' % (p.size, M))
    column = np.zeros(M, dtype=np.complex128)
    column[:p.size] = p
    row = np.zeros(M, dtype=np.complex128)
    row[0] = p[0]
    return scipy.linalg.toeplitz(column, row)


def decimation_pattern(l, M, D):
    """Deterministic pattern q_{l,d} = floor(M/D)(d-1) + (l-1), l and d 1-based."""
    if not 1 <= D <= M:
        raise ArgumentError('rank D=%d outside [1, M=%d]' % (D, M))
    if l < 1:
        raise ArgumentError('branch index l=%d must be >= 1' % l)
    offsets = (M // D) * np.arange(D) + (l - 1)
    overflow = np.flatnonzero(offsets > M - 1)
    if overflow.size:
        d = int(overflow[0]) + 1
        raise ArgumentError('offset q_{%d,%d}=%d exceeds M-1=%d' % (l, d, offsets[d - 1], M - 1))
    return DecimationPattern(offsets, M, l)


def structural_counts(pattern, I):
    """Structural nonzero counts of T_l R': phi per row, psi per column."""
    q = pattern.offsets
    phi = np.minimum(I, pattern.M - q)
    j = np.arange(I)
    psi = np.count_nonzero(q[:, None] + j[None, :] <= pattern.M - 1, axis=0)
    phi.setflags(write=False)
    psi.setflags(write=False)
    return phi, psi


def project_hankel(R, branch):
    """rbar_l = T_l R' conj(p_l) for an already built Hankel matrix."""
    return R[branch.pattern.offsets] @ branch.p.conj()


def project_branch(r, branch):
    """D-dimensional projection of the received vector through branch l."""
    R = hankel_from_received(r, branch.interpolator.I)
    return project_hankel(R, branch)


def interpolator_input(R, branch, w):
    """u = R'^T T_l^T conj(w), so that w^H rbar_l = p_l^H u."""
    return R[branch.pattern.offsets].T @ np.conj(w)


def tap_energies(p, branch):
    """Diagonal of S^H S: c_d = |p_1|^2 + ... + |p_{phi_d}|^2."""
    p = p.p if isinstance(p, Interpolator) else np.asarray(p)
    partial = np.cumsum(np.abs(p) ** 2)
    return partial[branch.phi - 1]


def weight_energies(w, branch):
    """W_j = sum of |w_d|^2 over the rows whose structural support reaches tap j."""
    I = branch.interpolator.I
    support = branch.phi[:, None] > np.arange(I)[None, :]
    return (np.abs(w) ** 2) @ support


def g_value(p, w, branch):
    """g = w^H S^H S w = sum_d |w_d|^2 (|p_1|^2 + ... + |p_{phi_d}|^2).

    This is the structural form. It equals ||S^H w||^2 only when the branch is
    not overlapping; otherwise the cross terms between rows are left out (see
    dense_g_value()).
    """
    return float(np.abs(w) ** 2 @ tap_energies(p, branch))


def dense_g_value(p, w, branch):
    """||P_l T_l^T w||^2 including the cross terms between overlapping rows."""
    P = toeplitz_interp_matrix(p, branch.pattern.M)
    v = P[:, branch.pattern.offsets] @ np.asarray(w, dtype=np.complex128)
    return float(np.vdot(v, v).real)


def dense_subspace_matrix(branch):
    """D x M matrix T_l P_l^H (tests and oracles only)."""
    P = toeplitz_interp_matrix(branch.interpolator, branch.pattern.M)
    return P.conj().T[branch.pattern.offsets]


################################################################################

def enumerate_patterns(M, D):
    """All ordered selections of D distinct rows out of M: M (M-1) ... (M-D+1) patterns."""
    for offsets in itertools.permutations(range(M), D):
        yield DecimationPattern(np.array(offsets), M, l=1)


def exhaustive_decimation_oracle(ensemble, p, w, M, D, rho):
    """Pattern minimizing the mean branch error probability over an ensemble.

    'ensemble' - sequence of (r, b) pairs, r of length M and b = +-1
    'p', 'w' - fixed interpolator taps and reduced-rank filter
    return - (best DecimationPattern, its mean P_e)
    """
    import mber

    if M > ORACLE_MAX_M or D > ORACLE_MAX_D:
        raise ArgumentError('exhaustive decimation limited to M <= %d, D <= %d (got M=%d, D=%d)'
            % (ORACLE_MAX_M, ORACLE_MAX_D, M, D))
    p = p.p if isinstance(p, Interpolator) else np.asarray(p, dtype=np.complex128)
    w = np.asarray(w, dtype=np.complex128)
    hankels = [(hankel_from_received(r, p.size), b) for r, b in ensemble]
    best, best_pe = None, np.inf
    n_patterns = 0
    for pattern in enumerate_patterns(M, D):
        n_patterns += 1
        branch = BranchState(Interpolator(p), pattern)
        g = g_value(p, w, branch)
        pe = np.mean([mber.branch_error_prob(np.vdot(w, project_hankel(R, branch)), b, g, rho)
            for R, b in hankels])
        if pe < best_pe:
            best, best_pe = pattern, pe
    _logger.debug('exhaustive decimation: %d patterns, best offsets %s, mean P_e %.4g'
        % (n_patterns, best.offsets.tolist(), best_pe))
    return best, float(best_pe)
