#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Receivers with a common symbol-by-symbol interface used by the harness."""

from collections import namedtuple
from dataclasses import replace

import numpy as np

import baselines
import log
import mber

# 'branch' is 0 for full-rank receivers, 'mu_p' is empty for them
Observation = namedtuple('Observation', ['decision', 'branch', 'mu_w', 'mu_p', 'constraint_error'])


class AbstractReceiver:
    """
    Detects the desired stream one received vector at a time. The first
    'training_length' symbols are processed in TR mode (true symbol used for
    adaptation), the rest in DD mode (own decisions used).
    """
    name = None

    def __init__(self, cfg, system):
        self.cfg = cfg
        self.training_length = cfg.tr_length
        self.symbols_seen = 0
        self.logger = log.getLogger('receivers')

    @property
    def training(self):
        return self.symbols_seen < self.training_length

    def step(self, r, b):
        # should return an Observation; 'b' is the transmitted symbol, to be used in TR mode only
        raise NotImplementedError('Abstract')

    @property
    def n_branches(self):
        return 0


class JidfMberReceiver(AbstractReceiver):
    """Reduced-rank MBER receiver with B interpolation/decimation branches."""
    name = 'jidf-mber'

    def __init__(self, cfg, system):
        super().__init__(cfg, system)
        self.state = mber.init_receiver(system.M, cfg.D, cfg.I, cfg.B, cfg.kernel_rho(system),
            cfg.tr_length, controller=cfg.step_controller(),
            desired=(cfg.desired_user, cfg.desired_stream))

    @property
    def n_branches(self):
        return self.state.B

    def step(self, r, b):
        result, self.state = mber.receiver_step(self.state, r, b if self.training else None)
        self.symbols_seen += 1
        mu_p = np.array([ctrl.mu for ctrl in self.state.ctrl_p])
        return Observation(result.decision, result.branch, self.state.ctrl_w.mu, mu_p,
            result.constraint_error)


class FullRankReceiver(AbstractReceiver):
    """Full-rank adaptive receiver; subclasses choose the update."""

    def __init__(self, cfg, system, mu):
        super().__init__(cfg, system)
        ctrl = None
        if cfg.baseline_adaptive_mu:
            ctrl = cfg.step_controller()
        self.filter = baselines.FullRankFilter.unit(system.M, ctrl)
        self.mu = mu
        self.rho = cfg.kernel_rho(system)
        self.diverged = False

    def update(self, r, ref, mu):
        raise NotImplementedError('Abstract')

    def step(self, r, b):
        f = self.filter
        mu = f.ctrl.mu if f.ctrl is not None else self.mu
        with np.errstate(over='ignore', invalid='ignore'):
            x = f.output(r)
            decision = mber.decide(x)
            ref = b if self.training else decision
            try:
                f = self.update(r, ref, mu)
            except ArithmeticError:
                f = None
        if f is None:
            if not self.diverged:
                self.logger.warning('%s filter diverged at symbol %d, keeping last finite weights'
                    % (self.name, self.symbols_seen))
            self.diverged = True
        else:
            if f.ctrl is not None:
                f = replace(f, ctrl=mber.adapt_step_size(f.ctrl, x, decision, self.rho))
            self.filter = f
        self.symbols_seen += 1
        mu_w = self.filter.ctrl.mu if self.filter.ctrl is not None else self.mu
        return Observation(decision, 0, mu_w, np.empty(0), 0.0)


class LmsReceiver(FullRankReceiver):
    name = 'full-lms'

    def __init__(self, cfg, system):
        super().__init__(cfg, system, cfg.mu_lms)

    def update(self, r, ref, mu):
        return baselines.lms_step(self.filter, r, ref, mu)


class NlmsReceiver(FullRankReceiver):
    name = 'full-nlms'

    def __init__(self, cfg, system):
        super().__init__(cfg, system, cfg.mu_lms)

    def update(self, r, ref, mu):
        return baselines.nlms_step(self.filter, r, ref, mu)


class FullRankMberReceiver(FullRankReceiver):
    name = 'full-mber'

    def __init__(self, cfg, system):
        super().__init__(cfg, system, cfg.mu_mber)

    def update(self, r, ref, mu):
        return baselines.mber_fullrank_step(self.filter, r, ref, mu, self.rho)


RECEIVERS = {cls.name: cls for cls in (JidfMberReceiver, LmsReceiver, NlmsReceiver, FullRankMberReceiver)}


def make_receiver(name, cfg, system):
    return RECEIVERS[name](cfg, system)
