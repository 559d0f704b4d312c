"""
qslkit Numerics Service
Deterministic adaptive quadrature and finite-difference helpers.

Finite intervals go through QUADPACK's adaptive Gauss-Kronrod routine
(scipy.integrate.quad); vector-valued integrands share one adaptive pass via
scipy.integrate.quad_vec. Semi-infinite integrals are rescaled by their
exponential decay scale and truncated where the envelope drops below abs_tol.
"""

import logging
import math
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np
from scipy.integrate import quad, quad_vec

from qslkit.models import QuadratureSpec

logger = logging.getLogger(__name__)

# Truncation search for semi-infinite integrals (in units of the decay scale)
TAIL_HEADROOM = 10.0
TAIL_STEP = 10.0
TAIL_LIMIT = 700.0
ENVELOPE_SAMPLES = 33

# Magnitude sampling for integrand-relative absolute tolerances
SCALE_SAMPLES = 9
SCALE_FLOOR = 1e-300


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message: str, a: float, b: float):
        super().__init__(f"Quadrature on [{a:.12g}, {b:.12g}] failed: {message}")
        self.a = a
        self.b = b


class QuadratureResult(NamedTuple):
    value: float
    abs_error: float


def integrate_with_error(
    f: Callable[[float], float],
    a: float,
    b: float,
    spec: QuadratureSpec,
    points: Optional[Sequence[float]] = None,
) -> QuadratureResult:
    """
    Integrate f over [a, b] within spec tolerances.

    Args:
        f: Real integrand, finite on [a, b] except at integrable points
        a, b: Interval, a <= b
        spec: Tolerances and depth budget
        points: Optional interior break points (kinks, near-singularities)

    Returns:
        QuadratureResult with QUADPACK's error estimate

    Raises:
        QuadratureError: when QUADPACK reports any failure
    """
    if a > b:
        raise ValueError(f"Integration bounds out of order: a={a} > b={b}")
    if a == b:
        return QuadratureResult(0.0, 0.0)

    inner = None
    if points:
        inner = sorted(p for p in points if a < p < b) or None

    result = quad(
        f, a, b,
        epsabs=spec.abs_tol,
        epsrel=spec.rel_tol,
        limit=spec.limit,
        points=inner,
        full_output=1,
    )
    # QUADPACK appends a message only when ier != 0
    if len(result) > 3:
        logger.debug(f"quad failed on [{a}, {b}]: {result[3]}")
        raise QuadratureError(str(result[3]).strip(), a, b)
    value, abs_error = result[0], result[1]
    return QuadratureResult(float(value), float(abs_error))


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    spec: QuadratureSpec,
    points: Optional[Sequence[float]] = None,
) -> float:
    """Adaptive Gauss-Kronrod estimate of the integral of f over [a, b]."""
    return integrate_with_error(f, a, b, spec, points).value


def integrate_vector(
    f: Callable[[float], np.ndarray],
    a: float,
    b: float,
    spec: QuadratureSpec,
) -> np.ndarray:
    """
    Integrate a vector-valued integrand component-wise in one adaptive pass.

    Every component sees the same Gauss-Kronrod nodes and positive weights,
    so pointwise orderings between components carry over to the integrals.
    """
    if a > b:
        raise ValueError(f"Integration bounds out of order: a={a} > b={b}")
    if a == b:
        return np.zeros_like(np.asarray(f(a), dtype=float))

    value, _, info = quad_vec(
        f, a, b,
        epsabs=spec.abs_tol,
        epsrel=spec.rel_tol,
        limit=spec.limit,
        full_output=True,
    )
    if not info.success:
        logger.debug(f"quad_vec failed on [{a}, {b}]: {info.message}")
        raise QuadratureError(info.message, a, b)
    return np.asarray(value, dtype=float)


def scaled_to_integrand(
    f: Callable[[float], object],
    a: float,
    b: float,
    spec: QuadratureSpec,
) -> QuadratureSpec:
    """
    Copy of spec whose abs_tol is measured in units of the largest sampled |f| on [a, b].

    Window averages of decaying speeds can sit many orders below 1; a fixed
    abs_tol then swamps rel_tol and the average loses its relative accuracy.
    """
    scale = max(float(np.max(np.abs(f(x)))) for x in np.linspace(a, b, SCALE_SAMPLES))
    return spec.model_copy(update={"abs_tol": spec.abs_tol * max(scale, SCALE_FLOOR)})


def _envelope(f: Callable[[float], float], decay_scale: float, x_max: float) -> float:
    """Sampled sup of |f(w)| e^(w/scale) over the last half of the truncated range."""
    xs = np.linspace(0.5 * x_max, x_max, ENVELOPE_SAMPLES)
    return max(abs(f(decay_scale * x)) * math.exp(x) for x in xs)


def integrate_semi_infinite_with_error(
    f: Callable[[float], float],
    decay_scale: float,
    spec: QuadratureSpec,
) -> QuadratureResult:
    """
    Integrate f over [0, inf) for integrands decaying like e^(-w/decay_scale).

    Substitutes w = decay_scale * x and truncates at the first x_max where the
    envelope bound M * decay_scale * e^(-x_max) on the tail falls below
    abs_tol / 2. The tail bound is added to the reported error.
    """
    if decay_scale <= 0.0:
        raise ValueError(f"decay_scale must be positive, got {decay_scale}")

    x_max = math.log(1.0 / spec.abs_tol) + TAIL_HEADROOM if spec.abs_tol < 1.0 else TAIL_HEADROOM
    tail = _envelope(f, decay_scale, x_max) * decay_scale * math.exp(-x_max)
    while tail > 0.5 * spec.abs_tol and x_max + TAIL_STEP <= TAIL_LIMIT:
        x_max += TAIL_STEP
        tail = _envelope(f, decay_scale, x_max) * decay_scale * math.exp(-x_max)
    if tail > 0.5 * spec.abs_tol:
        raise QuadratureError(f"tail bound {tail:.3e} above tolerance", 0.0, math.inf)

    body = integrate_with_error(
        lambda x: decay_scale * f(decay_scale * x), 0.0, x_max, spec
    )
    return QuadratureResult(body.value, body.abs_error + tail)


def integrate_semi_infinite(
    f: Callable[[float], float],
    decay_scale: float,
    spec: QuadratureSpec,
) -> float:
    return integrate_semi_infinite_with_error(f, decay_scale, spec).value


def central_derivative(f: Callable[[float], float], t: float, h: float) -> float:
    """(f(t + h) - f(t - h)) / 2h."""
    if h <= 0.0:
        raise ValueError(f"Step must be positive, got {h}")
    return (f(t + h) - f(t - h)) / (2.0 * h)
