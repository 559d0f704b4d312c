"""
qslkit Channel Models Service
Exact reduced dynamics of the damped Jaynes-Cummings and Ohmic-family
dephasing channels.

Both channels expose state(t), the closed-form state derivative, the
rate-based Lindblad generator and one scalar decay signal (p_t or q_t).

Conventions: index 0 is the ground state, index 1 the excited state, so the
excited state is the Bloch vector (0, 0, -1) and sigma_- = |0><1|.
"""

import logging
import math
from abc import ABC, abstractmethod
from typing import Tuple

from scipy.special import gamma as gamma_fn

from qslkit.models import BlochVector, DampedJCParams, OhmicParams
from qslkit.services.qubit_core import DensityMatrix2, Operator2

logger = logging.getLogger(__name__)

# |d| below this fraction of lambda selects the critical (d = 0) branch
DEGENERATE_BRANCH_RATIO = 1e-9
# JC rate denominator magnitude treated as a pole
POLE_THRESHOLD = 1e-14
# |s - 1| below this uses the series form of the dephasing profile
SERIES_WINDOW = 1e-4
EULER_GAMMA = 0.5772156649015329

HYPERBOLIC = "hyperbolic"
CRITICAL = "critical"
TRIGONOMETRIC = "trigonometric"


class DecayRatePoleError(ArithmeticError):
    """The JC decay rate diverges (p_t = 0 under strong coupling)."""

    def __init__(self, t: float, denominator: float):
        super().__init__(f"JC decay rate has a pole at t={t:.12g} (denominator {denominator:.3e})")
        self.t = t


# --- Damped Jaynes-Cummings ---

def _jc_branch(p: DampedJCParams) -> Tuple[str, float]:
    """Branch name and |d| for d = sqrt(lambda^2 - 2 gamma0 lambda)."""
    disc = p.lam * p.lam - 2.0 * p.gamma0 * p.lam
    d = math.sqrt(abs(disc))
    if d < DEGENERATE_BRANCH_RATIO * p.lam:
        return CRITICAL, 0.0
    return (HYPERBOLIC if disc > 0 else TRIGONOMETRIC), d


def jc_regime(p: DampedJCParams) -> str:
    """'markovian' (lambda > 2 gamma0), 'critical' or 'non_markovian'."""
    branch, _ = _jc_branch(p)
    return {HYPERBOLIC: "markovian", CRITICAL: "critical", TRIGONOMETRIC: "non_markovian"}[branch]


def _jc_amplitude(p: DampedJCParams, t: float) -> Tuple[float, float]:
    """
    Scaled amplitude w = e^(-lambda t/2) u(t) and its companion z = e^(-lambda t/2) u'(t).

    u(t) = cosh(dt/2) + (lambda/d) sinh(dt/2) with the trigonometric and
    linear analogues on the other branches, so that p_t = w^2.
    """
    branch, d = _jc_branch(p)
    lam = p.lam
    if branch == HYPERBOLIC:
        x = 0.5 * d * t
        # e^(-lambda t/2) cosh x and e^(-lambda t/2) sinh x without overflow
        head = 0.5 * math.exp(x - 0.5 * lam * t)
        ch = head * (1.0 + math.exp(-2.0 * x))
        sh = head * -math.expm1(-2.0 * x)
        return ch + (lam / d) * sh, 0.5 * d * sh + 0.5 * lam * ch
    envelope = math.exp(-0.5 * lam * t)
    if branch == CRITICAL:
        return envelope * (1.0 + 0.5 * lam * t), envelope * 0.5 * lam
    x = 0.5 * d * t
    cos_x, sin_x = math.cos(x), math.sin(x)
    return (
        envelope * (cos_x + (lam / d) * sin_x),
        envelope * (-0.5 * d * sin_x + 0.5 * lam * cos_x),
    )


def jc_decay_rate(p: DampedJCParams, t: float) -> float:
    """
    gamma_t = 2 gamma0 lambda sinh(dt/2) / (d cosh(dt/2) + lambda sinh(dt/2)).

    Raises:
        DecayRatePoleError: when the denominator vanishes (strong coupling)
    """
    if t < 0.0:
        raise ValueError(f"t must be non-negative, got {t}")
    branch, d = _jc_branch(p)
    lam = p.lam
    if branch == HYPERBOLIC:
        th = math.tanh(0.5 * d * t)
        return 2.0 * p.gamma0 * lam * th / (d + lam * th)
    if branch == CRITICAL:
        return p.gamma0 * lam * t / (1.0 + 0.5 * lam * t)
    x = 0.5 * d * t
    denominator = d * math.cos(x) + lam * math.sin(x)
    if abs(denominator) < POLE_THRESHOLD:
        raise DecayRatePoleError(t, denominator)
    return 2.0 * p.gamma0 * lam * math.sin(x) / denominator


def jc_population(p: DampedJCParams, t: float) -> float:
    """p_t = exp(-int_0^t gamma) = e^(-lambda t) u(t)^2."""
    if t < 0.0:
        raise ValueError(f"t must be non-negative, got {t}")
    w, _ = _jc_amplitude(p, t)
    return w * w


def jc_population_derivative(p: DampedJCParams, t: float) -> float:
    """Analytic p_t' = e^(-lambda t)(2 u u' - lambda u^2); finite at the zeros of p_t."""
    if t < 0.0:
        raise ValueError(f"t must be non-negative, got {t}")
    w, z = _jc_amplitude(p, t)
    return 2.0 * w * z - p.lam * w * w


def jc_amplitude_derivative(p: DampedJCParams, t: float) -> float:
    """d/dt sqrt(p_t), taking the right-hand branch where p_t = 0."""
    if t < 0.0:
        raise ValueError(f"t must be non-negative, got {t}")
    w, z = _jc_amplitude(p, t)
    rate = z - 0.5 * p.lam * w
    return -rate if w < 0.0 else rate


def jc_markov_population(gamma0: float, t: float) -> float:
    """Constant-rate population e^(-gamma0 t)."""
    return math.exp(-gamma0 * t)


def jc_spectral_density(p: DampedJCParams, omega: float) -> float:
    """Lorentzian J(w) = gamma0 lambda / (2 pi ((omega0 - w)^2 + lambda^2))."""
    return p.gamma0 * p.lam / (2.0 * math.pi * ((p.omega0 - omega) ** 2 + p.lam ** 2))


def _amplitude_damped_state(v0: BlochVector, population: float) -> DensityMatrix2:
    excited = 0.5 * (1.0 - v0.v_z) * population
    off = 0.5 * complex(v0.v_x, -v0.v_y) * math.sqrt(population)
    return DensityMatrix2(1.0 - excited, off, off.conjugate(), excited)


def _amplitude_damped_derivative(v0: BlochVector, dp: float, dsqrt_p: float) -> Operator2:
    excited_rate = 0.5 * (1.0 - v0.v_z) * dp
    off_rate = 0.5 * complex(v0.v_x, -v0.v_y) * dsqrt_p
    return Operator2(-excited_rate, off_rate, off_rate.conjugate(), excited_rate)


def _amplitude_damping_generator(rate: float, rho: Operator2) -> Operator2:
    # rate (s- rho s+ - {s+ s-, rho}/2) with s+ s- = |1><1|
    return Operator2(
        rate * rho.m11,
        -0.5 * rate * rho.m01,
        -0.5 * rate * rho.m10,
        -rate * rho.m11,
    )


def jc_state(p: DampedJCParams, v0: BlochVector, t: float) -> DensityMatrix2:
    """Reduced state: excited population (1 - v_z) p_t / 2, coherence (v_x - i v_y) sqrt(p_t) / 2."""
    return _amplitude_damped_state(v0, jc_population(p, t))


def jc_generator(p: DampedJCParams, rho: Operator2, t: float) -> Operator2:
    """L_t(rho) = gamma_t (s- rho s+ - s+ s- rho / 2 - rho s+ s- / 2)."""
    return _amplitude_damping_generator(jc_decay_rate(p, t), rho)


# --- Ohmic-family dephasing ---

def ohmic_spectral_density(p: OhmicParams, omega: float) -> float:
    """J(w) = eta w^s / wc^(s-1) e^(-w/wc)."""
    if omega < 0.0:
        raise ValueError(f"omega must be non-negative, got {omega}")
    if omega == 0.0:
        return 0.0
    return p.eta * omega ** p.s * p.omega_c ** (1.0 - p.s) * math.exp(-omega / p.omega_c)


def dephasing_integrand(p: OhmicParams, t: float, omega: float) -> float:
    """J(w)(1 - cos wt)/w^2 at zero temperature."""
    if omega == 0.0:
        return 0.0
    half = math.sin(0.5 * omega * t)
    return ohmic_spectral_density(p, omega) * 2.0 * half * half / (omega * omega)


def _dephasing_profile(s: float, x: float) -> float:
    """
    Phi(x, s) = Gamma(s-1) [1 - cos((s-1) arctan x) (1 + x^2)^((1-s)/2)], x = wc t.

    Continuous through s = 1 where Phi = ln(1 + x^2) / 2.
    """
    if x == 0.0:
        return 0.0
    eps = s - 1.0
    half_log = 0.5 * math.log1p(x * x)
    angle = math.atan(x)
    if abs(eps) < SERIES_WINDOW:
        return half_log - eps * (0.5 * (half_log ** 2 - angle ** 2) + EULER_GAMMA * half_log)
    # 1 - cos(a) e^(-b) = -expm1(-b) + e^(-b) 2 sin^2(a/2)
    b = eps * half_log
    half_angle = math.sin(0.5 * eps * angle)
    bracket = -math.expm1(-b) + math.exp(-b) * 2.0 * half_angle * half_angle
    return float(gamma_fn(eps)) * bracket


def dephasing_exponent(p: OhmicParams, t: float) -> float:
    """Decoherence exponent eta kappa Phi(wc t, s); zero at t = 0."""
    if t < 0.0:
        raise ValueError(f"t must be non-negative, got {t}")
    return p.eta * p.kappa * _dephasing_profile(p.s, p.omega_c * t)


def dephasing_coherence_factor(p: OhmicParams, t: float) -> float:
    """q_t = exp(-exponent)."""
    return math.exp(-dephasing_exponent(p, t))


def dephasing_rate(p: OhmicParams, t: float) -> float:
    """Instantaneous rate d/dt exponent = eta kappa wc Gamma(s) sin(s arctan wc t) (1 + wc^2 t^2)^(-s/2)."""
    if t < 0.0:
        raise ValueError(f"t must be non-negative, got {t}")
    x = p.omega_c * t
    return (
        p.eta * p.kappa * p.omega_c * float(gamma_fn(p.s))
        * math.sin(p.s * math.atan(x)) * (1.0 + x * x) ** (-0.5 * p.s)
    )


def dephasing_coherence_derivative(p: OhmicParams, t: float) -> float:
    """q_t' = -rate q_t."""
    return -dephasing_rate(p, t) * dephasing_coherence_factor(p, t)


def coherence_trapping_value(p: OhmicParams) -> float:
    """Long-time q: exp(-eta kappa Gamma(s-1)) for s > 1, 0 otherwise."""
    if p.s <= 1.0:
        return 0.0
    return math.exp(-p.eta * p.kappa * float(gamma_fn(p.s - 1.0)))


def dephasing_state(p: OhmicParams, v0: BlochVector, t: float) -> DensityMatrix2:
    """Populations frozen at (1 +- v_z)/2, coherence (v_x - i v_y) q_t / 2."""
    off = 0.5 * complex(v0.v_x, -v0.v_y) * dephasing_coherence_factor(p, t)
    return DensityMatrix2(0.5 * (1.0 + v0.v_z), off, off.conjugate(), 0.5 * (1.0 - v0.v_z))


def dephasing_generator(p: OhmicParams, rho: Operator2, t: float) -> Operator2:
    """L_t(rho) = rate (sz rho sz - rho) / 2: off-diagonals times -rate, diagonal untouched."""
    rate = dephasing_rate(p, t)
    return Operator2(0.0, -rate * rho.m01, -rate * rho.m10, 0.0)


# --- Uniform channel interface ---

class ChannelModel(ABC):
    """Dynamics descriptor consumed by the speed-limit engine."""

    kind: str = ""

    @abstractmethod
    def state(self, v0: BlochVector, t: float) -> DensityMatrix2:
        ...

    @abstractmethod
    def state_derivative(self, v0: BlochVector, t: float) -> Operator2:
        """Closed-form d(rho_t)/dt; pole-free, equals generator(state(t), t) where defined."""

    @abstractmethod
    def generator(self, rho: Operator2, t: float) -> Operator2:
        ...

    @abstractmethod
    def signal(self, t: float) -> float:
        """Scalar decay signal: p_t for JC, q_t for dephasing."""

    def state_change(self, v0: BlochVector, t_from: float, t_to: float) -> Operator2:
        """rho(t_to) - rho(t_from)."""
        return self.state(v0, t_to) - self.state(v0, t_from)


class JaynesCummingsChannel(ChannelModel):
    """
    Damped Jaynes-Cummings channel.

    With markovian=True the rate is held at gamma0 (ideal Markov mode) and
    p_t = e^(-gamma0 t).
    """

    kind = "jc"

    def __init__(self, params: DampedJCParams, markovian: bool = False):
        self.params = params
        self.markovian = markovian

    def population(self, t: float) -> float:
        if self.markovian:
            return jc_markov_population(self.params.gamma0, t)
        return jc_population(self.params, t)

    def population_derivative(self, t: float) -> float:
        if self.markovian:
            return -self.params.gamma0 * jc_markov_population(self.params.gamma0, t)
        return jc_population_derivative(self.params, t)

    def decay_rate(self, t: float) -> float:
        if self.markovian:
            return self.params.gamma0
        return jc_decay_rate(self.params, t)

    def state(self, v0: BlochVector, t: float) -> DensityMatrix2:
        return _amplitude_damped_state(v0, self.population(t))

    def state_derivative(self, v0: BlochVector, t: float) -> Operator2:
        if self.markovian:
            g = self.params.gamma0
            dsqrt_p = -0.5 * g * math.exp(-0.5 * g * t)
        else:
            dsqrt_p = jc_amplitude_derivative(self.params, t)
        return _amplitude_damped_derivative(v0, self.population_derivative(t), dsqrt_p)

    def generator(self, rho: Operator2, t: float) -> Operator2:
        return _amplitude_damping_generator(self.decay_rate(t), rho)

    def state_change(self, v0: BlochVector, t_from: float, t_to: float) -> Operator2:
        # Formed from p differences: 1 - p_t rounds away small populations
        p_from, p_to = self.population(t_from), self.population(t_to)
        excited = 0.5 * (1.0 - v0.v_z) * (p_to - p_from)
        off = 0.5 * complex(v0.v_x, -v0.v_y) * (math.sqrt(p_to) - math.sqrt(p_from))
        return Operator2(-excited, off, off.conjugate(), excited)

    def signal(self, t: float) -> float:
        return self.population(t)


class OhmicDephasingChannel(ChannelModel):
    """Zero-temperature pure dephasing with an Ohmic-family spectrum."""

    kind = "dephasing"

    def __init__(self, params: OhmicParams):
        self.params = params

    def state(self, v0: BlochVector, t: float) -> DensityMatrix2:
        return dephasing_state(self.params, v0, t)

    def state_derivative(self, v0: BlochVector, t: float) -> Operator2:
        off = 0.5 * complex(v0.v_x, -v0.v_y) * dephasing_coherence_derivative(self.params, t)
        return Operator2(0.0, off, off.conjugate(), 0.0)

    def generator(self, rho: Operator2, t: float) -> Operator2:
        return dephasing_generator(self.params, rho, t)

    def signal(self, t: float) -> float:
        return dephasing_coherence_factor(self.params, t)
