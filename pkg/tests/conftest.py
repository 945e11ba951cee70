"""Shared fixtures."""

import numpy as np
import pytest

import config


@pytest.fixture
def rng():
    """Seeded generator, fresh for every test."""
    return np.random.default_rng(20240611)


@pytest.fixture
def crandn(rng):
    """Unit-variance circular complex Gaussian samples of the given shape."""
    def draw(*shape):
        return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
    return draw


@pytest.fixture
def desk():
    """Desk-scale configuration with a short schedule and few trials."""
    return config.parse_config(preset='desk', overrides=dict(trials=2, tr_length=40, dd_length=80))
