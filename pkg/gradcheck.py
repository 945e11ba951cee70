#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Central finite-difference check of the analytic MBER gradients."""

from dataclasses import dataclass

import numpy as np

import jidf
import log
import mber

logger = log.getLogger('gradcheck')

FD_STEP = 1e-6
TOLERANCE = 1e-5


@dataclass(frozen=True)
class Instance:
    r: np.ndarray
    b: float
    w: np.ndarray
    branch: jidf.BranchState
    rho: float


@dataclass(frozen=True)
class GradcheckReport:
    n_instances: int
    max_error_w: float
    max_error_p: float

    @property
    def passed(self):
        return max(self.max_error_w, self.max_error_p) < TOLERANCE


def crandn(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_instance(rng, M=8, D=3, I=2, B=2):
    """Random branch, filters and data with the normalized margin in [0.2, 2].

    rho is chosen per instance so that the argument of Q is moderate and the
    gradient is not vanishingly small.
    """
    while True:
        l = int(rng.integers(1, B + 1))
        branch = jidf.make_branch(l, M, D, I, p=crandn(rng, I))
        w = crandn(rng, D)
        r = crandn(rng, M)
        b = float(rng.choice([-1.0, 1.0]))
        g = jidf.g_value(branch.p, w, branch)
        re_x = np.vdot(w, jidf.project_branch(r, branch)).real
        if abs(re_x) > 1e-2:
            break
    rho = abs(re_x) / (np.sqrt(g) * rng.uniform(0.2, 2.0))
    return Instance(r=r, b=b, w=w, branch=branch, rho=rho)


def pe_of_w(inst, w):
    rbar = jidf.project_branch(inst.r, inst.branch)
    g = jidf.g_value(inst.branch.p, w, inst.branch)
    return mber.branch_error_prob(np.vdot(w, rbar), inst.b, g, inst.rho)


def pe_of_p(inst, p):
    branch = inst.branch.with_taps(p)
    rbar = jidf.project_branch(inst.r, branch)
    g = jidf.g_value(p, inst.w, branch)
    return mber.branch_error_prob(np.vdot(inst.w, rbar), inst.b, g, inst.rho)


def fd_gradient(f, x, h=FD_STEP):
    """(d/dRe + j d/dIm) / 2 of real function f by central differences."""
    x = np.asarray(x, dtype=np.complex128)
    grad = np.empty_like(x)
    for k in range(x.size):
        e = np.zeros_like(x)
        e[k] = h
        d_re = (f(x + e) - f(x - e)) / (2 * h)
        d_im = (f(x + 1j * e) - f(x - 1j * e)) / (2 * h)
        grad[k] = (d_re + 1j * d_im) / 2
    return grad


def relative_error(analytic, numeric):
    return float(np.linalg.norm(analytic - numeric) / np.linalg.norm(numeric))


def check_instance(inst):
    """Returns (relative error of grad_w, relative error of grad_p)."""
    gw = mber.grad_w(inst.r, inst.b, inst.w, inst.branch, inst.rho)
    gp = mber.grad_p(inst.r, inst.b, inst.w, inst.branch, inst.rho)
    fw = fd_gradient(lambda w: pe_of_w(inst, w), inst.w)
    fp = fd_gradient(lambda p: pe_of_p(inst, p), inst.branch.p)
    return relative_error(gw, fw), relative_error(gp, fp)


def run(n_instances=100, seed=0, M=8, D=3, I=2, B=2):
    rng = np.random.default_rng(seed)
    errors = np.array([check_instance(random_instance(rng, M, D, I, B)) for _ in range(n_instances)])
    report = GradcheckReport(n_instances, float(errors[:, 0].max()), float(errors[:, 1].max()))
    logger.info('gradcheck on %d instances (M=%d, D=%d, I=%d, B=%d): max rel. error w %.2e, p %.2e'
        % (n_instances, M, D, I, B, report.max_error_w, report.max_error_p))
    return report
