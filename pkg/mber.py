#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Minimum-BER adaptation of the interpolators and the shared reduced-rank filter.

For branch l with output xbar = w^H rbar_l and g = w^H S^H S w the smoothed
error probability is

    P_e = Q( sign(b) Re[xbar] / (rho sqrt(g)) )

Both gradients are Wirtinger derivatives with respect to the conjugated
parameters, d/dz* = (d/dRe z + j d/dIm z) / 2. The SG updates use the forms
with g = 1 substituted; the interpolators are rescaled after every change of
either filter so that the constraint holds.
"""

from dataclasses import dataclass, replace

import numpy as np
import scipy.special
import scipy.stats

import jidf
import log
from errors import ArgumentError, DegenerateSubspaceError

_logger = log.getLogger('mber')

DELTA1 = 0.99
DELTA2 = 1e-4
MU_MAX = 1e-2
MU_MIN = 1e-5
G_FLOOR = 1e-12

_SQRT_2PI = np.sqrt(2 * np.pi)


def q_function(x):
    """Gaussian tail probability Q(x) = erfc(x / sqrt(2)) / 2."""
    return 0.5 * scipy.special.erfc(np.asarray(x) / np.sqrt(2))


def _check_g(g):
    if not g > 0:
        raise DegenerateSubspaceError('quadratic form g=%r is not positive' % g)


def kernel_density(x_tilde, xbar, b, g, rho):
    """Single point Gaussian kernel density centred at sign(b) Re[xbar] with variance g rho^2."""
    _check_g(g)
    if not rho > 0:
        raise ArgumentError('kernel radius rho=%r must be positive' % rho)
    return scipy.stats.norm.pdf(x_tilde, loc=np.sign(b) * np.real(xbar), scale=rho * np.sqrt(g))


def branch_error_prob(xbar, b, g, rho):
    """P_e of one branch for output 'xbar', reference symbol 'b' and quadratic form 'g'."""
    _check_g(g)
    return float(q_function(np.sign(b) * np.real(xbar) / (rho * np.sqrt(g))))


def decide(xbar):
    """Hard decision sign(Re[xbar]), zero mapped to +1."""
    return 1.0 if np.real(xbar) >= 0 else -1.0


def kernel_gain(re_x, b, rho, g=1.0):
    return np.exp(-re_x ** 2 / (2 * rho ** 2 * g)) * np.sign(b) / (2 * _SQRT_2PI * rho)


@dataclass(frozen=True)
class KernelConfig:
    rho: float

    def __post_init__(self):
        if not self.rho > 0:
            raise ArgumentError('kernel radius rho=%r must be positive' % self.rho)


@dataclass(frozen=True)
class ReducedRankFilter:
    """Reduced-rank receive filter w (length D) shared by all branches."""
    w: np.ndarray

    def __post_init__(self):
        w = np.array(self.w, dtype=np.complex128).ravel()
        if not np.all(np.isfinite(w)):
            raise ArgumentError('reduced-rank filter is not finite')
        w.setflags(write=False)
        object.__setattr__(self, 'w', w)

    @property
    def D(self):
        return self.w.size

    @classmethod
    def unit(cls, D):
        w = np.zeros(D, dtype=np.complex128)
        w[0] = 1
        return cls(w)


@dataclass(frozen=True)
class StepSizeController:
    """Clamped recursion mu <- [delta1 mu + delta2 Q(sign(bhat) Re[xbar] / rho)] in [mu_minus, mu_plus]."""
    mu: float = MU_MAX
    delta1: float = DELTA1
    delta2: float = DELTA2
    mu_plus: float = MU_MAX
    mu_minus: float = MU_MIN

    def __post_init__(self):
        if not 0 < self.delta1 <= 1:
            raise ArgumentError('delta1=%r must lie in (0, 1]' % self.delta1)
        if not self.mu_minus <= self.mu <= self.mu_plus:
            raise ArgumentError('step size %r outside [%r, %r]' % (self.mu, self.mu_minus, self.mu_plus))


def adapt_step_size(ctrl, xbar, b_hat, rho):
    """One step of the adaptive step-size rule."""
    if not rho > 0:
        raise ArgumentError('kernel radius rho=%r must be positive' % rho)
    mu = ctrl.delta1 * ctrl.mu + ctrl.delta2 * float(q_function(np.sign(b_hat) * np.real(xbar) / rho))
    return replace(ctrl, mu=float(np.clip(mu, ctrl.mu_minus, ctrl.mu_plus)))


################################################################################
# gradients and constrained updates

def _hankel(r, branch, R):
    return jidf.hankel_from_received(r, branch.interpolator.I) if R is None else R


def _filter(w):
    return w.w if isinstance(w, ReducedRankFilter) else np.asarray(w, dtype=np.complex128)


def grad_w(r, b, w, branch, rho, R=None):
    """dP_e/dw* of branch 'branch' (general form, any g > 0)."""
    w = _filter(w)
    R = _hankel(r, branch, R)
    g = jidf.g_value(branch.p, w, branch)
    _check_g(g)
    rbar = jidf.project_hankel(R, branch)
    re_x = np.vdot(w, rbar).real
    SHSw = jidf.tap_energies(branch.p, branch) * w
    return -kernel_gain(re_x, b, rho, g) * (rbar / np.sqrt(g) - re_x * SHSw / g ** 1.5)


def grad_p(r, b, w, branch, rho, R=None):
    """Stacked dP_e/dp_j* of branch 'branch' (general form, any g > 0)."""
    w = _filter(w)
    R = _hankel(r, branch, R)
    p = branch.p
    u = jidf.interpolator_input(R, branch, w)
    W = jidf.weight_energies(w, branch)
    g = float(np.abs(p) ** 2 @ W)
    _check_g(g)
    re_x = np.vdot(p, u).real
    return -kernel_gain(re_x, b, rho, g) * (u / np.sqrt(g) - re_x * W * p / g ** 1.5)


def update_w(w, r, b, xbar, branch, mu_w, rho, R=None):
    """w <- w - mu_w dP_e/dw* with g = 1 substituted."""
    w = _filter(w)
    R = _hankel(r, branch, R)
    rbar = jidf.project_hankel(R, branch)
    re_x = np.real(xbar)
    SHSw = jidf.tap_energies(branch.p, branch) * w
    return ReducedRankFilter(w + mu_w * kernel_gain(re_x, b, rho) * (rbar - re_x * SHSw))


def update_p(branch, r, b, xbar, w, mu_p, rho, R=None):
    """p <- p - mu_p v_l with g = 1 substituted."""
    w = _filter(w)
    R = _hankel(r, branch, R)
    p = branch.p
    u = jidf.interpolator_input(R, branch, w)
    W = jidf.weight_energies(w, branch)
    re_x = np.real(xbar)
    return jidf.Interpolator(p + mu_p * kernel_gain(re_x, b, rho) * (u - re_x * W * p), branch.l)


def normalize_p(branch, w):
    """Scales p so that g(p, w) = 1; a degenerate p restarts from the unit impulse."""
    w = _filter(w)
    p = branch.p
    g = jidf.g_value(p, w, branch)
    if not g >= G_FLOOR:
        _logger.debug('branch %d: g=%.3g, restarting interpolator from unit impulse' % (branch.l, g))
        p = jidf.Interpolator.unit_impulse(branch.interpolator.I).p
        g = jidf.g_value(p, w, branch)
        if not g >= G_FLOOR:
            raise DegenerateSubspaceError('branch %d: reduced-rank filter has no support (g=%.3g)'
                % (branch.l, g))
    return jidf.Interpolator(p / np.sqrt(g), branch.l)


def select_branch(pe):
    """1-based index of the smallest error probability, lowest index on ties."""
    pe = np.asarray(pe, dtype=float)
    if pe.size < 1:
        raise ArgumentError('no branches to select from')
    return int(np.argmin(pe)) + 1


################################################################################
# receiver iteration

@dataclass(frozen=True)
class ReceiverState:
    """Filters and step sizes of one MBER-JIDF receiver for the desired stream (k, n)."""
    branches: tuple
    w: ReducedRankFilter
    ctrl_w: StepSizeController
    ctrl_p: tuple
    rho: float
    training_length: int
    symbols_seen: int = 0
    desired: tuple = (0, 0)
    incumbent: int = 1

    @property
    def B(self):
        return len(self.branches)

    @property
    def mode(self):
        return 'TR' if self.symbols_seen < self.training_length else 'DD'


@dataclass(frozen=True)
class StepResult:
    """Outcome of one receiver_step.

    'decision' - emitted symbol estimate, taken from branch 'output_branch'
    'branch' - branch selected against the reference symbol (1-based); it updates w
    'pe' - per-branch error probabilities used for that selection
    'constraint_error' - max_l |g(p_l) - 1| after the step

    The reference symbol is the training symbol in TR mode and the tentative
    decision of the incumbent branch in DD mode, so 'output_branch' and
    'branch' only differ while training.
    """
    decision: float
    branch: int
    pe: np.ndarray
    xbar: complex
    constraint_error: float
    output_branch: int


def init_receiver(M, D, I, B, rho, training_length, controller=None, desired=(0, 0)):
    """Unit-impulse filters, deterministic patterns and scaled interpolators."""
    KernelConfig(rho)
    controller = controller if controller is not None else StepSizeController()
    w = ReducedRankFilter.unit(D)
    branches = []
    for l in range(1, B + 1):
        branch = jidf.make_branch(l, M, D, I)
        if branch.overlapping:
            _logger.debug('branch %d: rows overlap (floor(M/D)=%d < I=%d), g drops their cross terms'
                % (l, M // D, I))
        branches.append(replace(branch, interpolator=normalize_p(branch, w)))
    return ReceiverState(branches=tuple(branches), w=w, ctrl_w=controller,
        ctrl_p=(controller,) * B, rho=float(rho), training_length=int(training_length),
        desired=tuple(desired))


def receiver_step(state, r, true_b=None):
    """One time instant: interpolator updates and scaling for every branch,
    branch selection, decision, reduced-rank filter update from the selected
    branch and step-size adaptation.

    The emitted decision comes from the branch that agrees best with the
    tentative decision of the incumbent (the branch that produced the previous
    output), so it never depends on the training symbol. In TR mode the
    filters and the step-size rule use the training symbol; in DD mode each
    branch uses its own decision.

    'true_b' - transmitted symbol of the desired stream (required in TR mode)
    return - (StepResult, new ReceiverState)
    """
    training = state.mode == 'TR'
    if training and true_b is None:
        raise ArgumentError('training symbol required in TR mode (symbol %d)' % state.symbols_seen)
    rho = state.rho
    w = state.w.w
    I = state.branches[0].interpolator.I
    R = jidf.hankel_from_received(r, I)

    # common to all branches, computed with the filters of the previous instant
    tentative = decide(np.vdot(w, jidf.project_hankel(R, state.branches[state.incumbent - 1])))

    branches = []
    for branch, ctrl in zip(state.branches, state.ctrl_p):
        xbar = np.vdot(w, jidf.project_hankel(R, branch))
        ref = true_b if training else decide(xbar)
        p = update_p(branch, r, ref, xbar, w, ctrl.mu, rho, R=R)
        branch = branch.with_taps(p.p)
        branches.append(branch.with_taps(normalize_p(branch, w).p))

    xbars = np.array([np.vdot(w, jidf.project_hankel(R, branch)) for branch in branches])
    gs = [jidf.g_value(branch.p, w, branch) for branch in branches]
    decisions = [decide(x) for x in xbars]
    pe_out = np.array([branch_error_prob(x, tentative, g, rho) for x, g in zip(xbars, gs)])
    out = select_branch(pe_out)
    decision = decisions[out - 1]
    if training:
        pe = np.array([branch_error_prob(x, true_b, g, rho) for x, g in zip(xbars, gs)])
        l_opt = select_branch(pe)
        refs = [true_b] * len(branches)
    else:
        pe, l_opt, refs = pe_out, out, decisions

    new_w = update_w(w, r, refs[l_opt - 1], xbars[l_opt - 1], branches[l_opt - 1], state.ctrl_w.mu, rho, R=R)
    ctrl_w = adapt_step_size(state.ctrl_w, xbars[l_opt - 1], refs[l_opt - 1], rho)
    ctrl_p = tuple(adapt_step_size(ctrl, x, ref, rho) for ctrl, x, ref in zip(state.ctrl_p, xbars, refs))

    rescaled = tuple(branch.with_taps(normalize_p(branch, new_w).p) for branch in branches)
    constraint_error = max(abs(jidf.g_value(b.p, new_w.w, b) - 1) for b in rescaled)

    new_state = replace(state, branches=rescaled, w=new_w, ctrl_w=ctrl_w, ctrl_p=ctrl_p,
        symbols_seen=state.symbols_seen + 1, incumbent=out)
    result = StepResult(decision, l_opt, pe, complex(xbars[out - 1]), constraint_error, out)
    return result, new_state
