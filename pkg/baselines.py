#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Full-rank reference receivers: LMS, NLMS and the full-rank MBER SG."""

from dataclasses import dataclass, replace

import numpy as np

import mber
from errors import ArgumentError

MU_LMS = 0.085
MU_MBER = 0.05
MU_REDUCED_RANK = 0.035  # recorded only, no reduced-rank MSE receiver is implemented
NLMS_EPS = 1e-9


@dataclass(frozen=True)
class FullRankFilter:
    """Full-rank filter w (length M) with an optional adaptive step-size controller."""
    w: np.ndarray
    ctrl: mber.StepSizeController = None

    def __post_init__(self):
        w = np.array(self.w, dtype=np.complex128).ravel()
        if not np.all(np.isfinite(w)):
            raise FloatingPointError('full-rank filter is not finite')
        w.setflags(write=False)
        object.__setattr__(self, 'w', w)

    @property
    def M(self):
        return self.w.size

    @classmethod
    def unit(cls, M, ctrl=None):
        w = np.zeros(M, dtype=np.complex128)
        w[0] = 1
        return cls(w, ctrl)

    def output(self, r):
        return np.vdot(self.w, r)


def _check(f, r):
    if np.shape(r) != (f.M,):
        raise ArgumentError('received vector of shape %s does not match filter length %d'
            % (np.shape(r), f.M))


def lms_step(f, r, b, mu):
    """e = b - w^H r, w <- w + mu conj(e) r."""
    _check(f, r)
    e = b - f.output(r)
    return replace(f, w=f.w + mu * np.conj(e) * r)


def nlms_step(f, r, b, mu, eps=NLMS_EPS):
    """LMS with the step normalized by the input energy ||r||^2."""
    _check(f, r)
    e = b - f.output(r)
    return replace(f, w=f.w + mu * np.conj(e) * r / (eps + np.vdot(r, r).real))


def mber_fullrank_step(f, r, b, mu, rho, normalize=True):
    """Full-rank MBER SG step (the reduced-rank update with S_D = I), then ||w|| = 1."""
    _check(f, r)
    re_x = f.output(r).real
    w = f.w + mu * mber.kernel_gain(re_x, b, rho) * (r - re_x * f.w)
    if normalize:
        w = w / np.linalg.norm(w)
    return replace(f, w=w)
