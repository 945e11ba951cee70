#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Uplink signal model: BPSK symbols, Clarke fading, AWGN and the received vector.

    r(i) = sum_k A_k H_k(i) b_k(i) + n(i)

Each channel coefficient is a sum of N_OSCILLATORS unit phasors

    h(i) = 1/sqrt(N) sum_n exp{j[2 pi fdT cos(alpha_n) i + phi_n]}

with alpha_n, phi_n uniform in [0, 2 pi), independent across coefficients.
"""

from dataclasses import dataclass, field, replace

import numpy as np
from numba import njit

from errors import ConfigurationError

N_OSCILLATORS = 16


@dataclass(frozen=True)
class SystemConfig:
    """Uplink dimensions and levels.

    'K' - number of users, 'N_U' - antennas per user, 'M' - receive antennas
    'amplitudes' - per-user real gains A_k (length K)
    'sigma' - noise standard deviation, sigma^2 is the complex variance per entry
    'fdT' - normalized Doppler rate
    """
    K: int
    N_U: int
    M: int
    amplitudes: tuple
    sigma: float
    fdT: float

    def __post_init__(self):
        object.__setattr__(self, 'amplitudes', tuple(float(a) for a in self.amplitudes))
        if self.K < 1 or self.N_U < 1:
            raise ConfigurationError('K and N_U must be >= 1 (K=%d, N_U=%d)' % (self.K, self.N_U), 'K')
        if self.K * self.N_U >= self.M:
            raise ConfigurationError('K*N_U must be < M (K=%d, N_U=%d, M=%d)'
                % (self.K, self.N_U, self.M), 'M')
        if len(self.amplitudes) != self.K:
            raise ConfigurationError('expected %d amplitudes, got %d'
                % (self.K, len(self.amplitudes)), 'amplitudes')
        if any(a <= 0 for a in self.amplitudes):
            raise ConfigurationError('amplitudes must be positive', 'amplitudes')
        if not self.sigma >= 0:
            raise ConfigurationError('sigma must be >= 0 (got %r)' % self.sigma, 'sigma')
        if not 0 <= self.fdT < 0.5:
            raise ConfigurationError('fdT must lie in [0, 0.5) (got %r)' % self.fdT, 'fdT')

    @classmethod
    def from_snr(cls, K, N_U, M, snr_db, fdT, amplitudes=None):
        """Builds a config with sigma from SNR = 10 log10(N_U A_1^2 / sigma^2)."""
        amplitudes = tuple(amplitudes) if amplitudes is not None else (1.0,) * K
        sigma = float(np.sqrt(N_U * amplitudes[0] ** 2 / 10 ** (snr_db / 10)))
        return cls(K=K, N_U=N_U, M=M, amplitudes=amplitudes, sigma=sigma, fdT=fdT)


@dataclass(frozen=True)
class FadingState:
    """Oscillator state of the K x M x N_U Clarke generator at symbol 'index'.

    'cos_alpha', 'phases' - arrays of shape (K*M*N_U, N_OSCILLATORS)
    'H' - current channel matrices, shape (K, M, N_U)
    """
    cos_alpha: np.ndarray
    phases: np.ndarray
    index: int
    H: np.ndarray = field(repr=False)

    @property
    def shape(self):
        return self.H.shape


@njit(cache=True)
def _sum_of_sinusoids(phase_rate, cos_alpha, phases):
    n_coef, n_osc = cos_alpha.shape
    out = np.empty(n_coef, dtype=np.complex128)
    scale = 1.0 / np.sqrt(n_osc)
    for c in range(n_coef):
        acc = 0j
        for n in range(n_osc):
            acc += np.exp(1j * (phase_rate * cos_alpha[c, n] + phases[c, n]))
        out[c] = acc * scale
    return out


def _channel_at(cos_alpha, phases, index, fdT, shape):
    phase_rate = 2 * np.pi * fdT * index
    return _sum_of_sinusoids(phase_rate, cos_alpha, phases).reshape(shape)


def init_channel(rng, K, N_U, M, fdT, n_oscillators=N_OSCILLATORS):
    """Draws oscillator angles and phases and returns the state at symbol 0."""
    shape = (K, M, N_U)
    n_coef = K * M * N_U
    cos_alpha = np.cos(2 * np.pi * rng.random((n_coef, n_oscillators)))
    phases = 2 * np.pi * rng.random((n_coef, n_oscillators))
    H = _channel_at(cos_alpha, phases, 0, fdT, shape)
    return FadingState(cos_alpha=cos_alpha, phases=phases, index=0, H=H)


def advance_channel(state, fdT):
    """Moves the fading state one symbol forward; fdT = 0 keeps H unchanged."""
    index = state.index + 1
    H = _channel_at(state.cos_alpha, state.phases, index, fdT, state.shape)
    return replace(state, index=index, H=H)


def generate_symbols(rng, K, N_U):
    """K x N_U matrix of equiprobable +-1 symbols."""
    if K < 1 or N_U < 1:
        raise ConfigurationError('K and N_U must be >= 1', 'K')
    return 2.0 * rng.integers(0, 2, size=(K, N_U)) - 1.0


def awgn(rng, sigma, M):
    """Circularly symmetric complex Gaussian noise, E[n n^H] = sigma^2 I."""
    if sigma < 0:
        raise ConfigurationError('sigma must be >= 0', 'sigma')
    if sigma == 0:
        return np.zeros(M, dtype=np.complex128)
    return sigma / np.sqrt(2) * (rng.standard_normal(M) + 1j * rng.standard_normal(M))


def received_vector(frames, channels, cfg, noise):
    """r = sum_k A_k H_k b_k + n.

    'frames' - K x N_U symbols, 'channels' - FadingState or (K, M, N_U) array
    """
    H = channels.H if isinstance(channels, FadingState) else np.asarray(channels)
    frames = np.asarray(frames)
    noise = np.asarray(noise)
    if H.shape != (cfg.K, cfg.M, cfg.N_U):
        raise ConfigurationError('channel shape %s does not match (K, M, N_U) = %s'
            % (H.shape, (cfg.K, cfg.M, cfg.N_U)), 'M')
    if frames.shape != (cfg.K, cfg.N_U):
        raise ConfigurationError('symbol frame shape %s does not match (K, N_U) = %s'
            % (frames.shape, (cfg.K, cfg.N_U)), 'N_U')
    if noise.shape != (cfg.M,):
        raise ConfigurationError('noise length %d does not match M=%d' % (noise.size, cfg.M), 'M')
    A = np.asarray(cfg.amplitudes)
    return np.einsum('k,kmn,kn->m', A, H, frames) + noise


class SignalSource:
    """Single-owner stream of (symbols, received vector) pairs for one trial."""
    def __init__(self, cfg, rng, n_oscillators=N_OSCILLATORS):
        self.cfg = cfg
        self.rng = rng
        self.state = init_channel(rng, cfg.K, cfg.N_U, cfg.M, cfg.fdT, n_oscillators)

    def __iter__(self):
        return self

    def __next__(self):
        cfg = self.cfg
        b = generate_symbols(self.rng, cfg.K, cfg.N_U)
        n = awgn(self.rng, cfg.sigma, cfg.M)
        r = received_vector(b, self.state, cfg, n)
        self.state = advance_channel(self.state, cfg.fdT)
        return b, r
