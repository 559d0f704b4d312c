"""Shared fixtures for the qslkit test suite."""

import numpy as np
import pytest

from qslkit.models import BlochVector, DampedJCParams, OhmicParams, QuadratureSpec


@pytest.fixture
def spec() -> QuadratureSpec:
    return QuadratureSpec(abs_tol=1e-10, rel_tol=1e-9, max_depth=40)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def excited() -> BlochVector:
    return BlochVector(v_z=-1.0)


@pytest.fixture
def weak_jc() -> DampedJCParams:
    return DampedJCParams(gamma0=0.1, lam=1.0)


@pytest.fixture
def strong_jc() -> DampedJCParams:
    return DampedJCParams(gamma0=10.0, lam=1.0)


@pytest.fixture
def ohmic() -> OhmicParams:
    return OhmicParams(eta=1.0, s=1.0, omega_c=1.0)


def random_bloch(rng: np.random.Generator) -> BlochVector:
    """Uniform draw from the Bloch ball."""
    direction = rng.normal(size=3)
    direction /= np.linalg.norm(direction)
    v = direction * rng.uniform(0.0, 1.0) ** (1.0 / 3.0) * (1.0 - 1e-12)
    return BlochVector(v_x=float(v[0]), v_y=float(v[1]), v_z=float(v[2]))
