"""
qslkit Speed Limit Service
Unified ML/MT quantum speed limit for arbitrary (mixed) initial states.

For a window [tau, tau + tau_d] the bound is

    tau_qsl = max(1/avg(sum sigma_i rho_i), 1/avg(sqrt(sum sigma_i^2)))
              * |f(tau + tau_d) - 1| tr(rho_tau^2)

where sigma_i are the singular values of L_t(rho_t), rho_i those of rho_tau
(both descending) and avg is the time average over the window. The
model-specific closed forms below are independent cross-checks of the engine.
"""

import logging
import math
from typing import Tuple

import numpy as np

from qslkit.models import BlochVector, Branch, DampedJCParams, OhmicParams, QuadratureSpec, SpeedLimitReport
from qslkit.services import numerics
from qslkit.services.channels import (
    ChannelModel,
    dephasing_coherence_derivative,
    dephasing_coherence_factor,
    jc_population,
    jc_population_derivative,
)
from qslkit.services.qubit_core import singular_values, trace_product

logger = logging.getLogger(__name__)

# Numerator and ML denominator both below this: frozen dynamics, bound is vacuous
DEGENERACY_TOL = 1e-14


def _check_window(tau: float, tau_d: float):
    if tau < 0.0:
        raise ValueError(f"tau must be non-negative, got {tau}")
    if tau_d <= 0.0:
        raise ValueError(f"tau_d must be positive, got {tau_d}")


def _window_averages(
    model: ChannelModel,
    v0: BlochVector,
    tau: float,
    tau_d: float,
    rho_sv: Tuple[float, float],
    spec: QuadratureSpec,
) -> np.ndarray:
    """Time averages of (sum sigma_i rho_i, sum sigma_i, sqrt(sum sigma_i^2))."""
    rho1, rho2 = rho_sv

    def integrand(t: float) -> np.ndarray:
        s1, s2 = singular_values(model.state_derivative(v0, t))
        return np.array([s1 * rho1 + s2 * rho2, s1 + s2, math.hypot(s1, s2)])

    window_spec = numerics.scaled_to_integrand(integrand, tau, tau + tau_d, spec)
    return numerics.integrate_vector(integrand, tau, tau + tau_d, window_spec) / tau_d


def qsl_unified(
    model: ChannelModel,
    v0: BlochVector,
    tau: float,
    tau_d: float,
    spec: QuadratureSpec,
) -> SpeedLimitReport:
    """
    Evaluate the unified bound for the window starting at tau.

    Raises:
        QuadratureError: when a window average does not converge
    """
    _check_window(tau, tau_d)
    rho_tau = model.state(v0, tau)
    rho_sv = singular_values(rho_tau)

    # |tr(rho_tau (rho_end - rho_tau))| == |f - 1| tr(rho_tau^2)
    numerator = abs(trace_product(rho_tau, model.state_change(v0, tau, tau + tau_d)).real)
    d_ml, d_ml_loose, d_mt = (float(x) for x in _window_averages(model, v0, tau, tau_d, rho_sv, spec))

    degenerate = bool((numerator < DEGENERACY_TOL and d_ml < DEGENERACY_TOL) or d_ml <= 0.0)
    if degenerate:
        tau_qsl = 0.0
        dominant = Branch.ML
    else:
        inv_ml = 1.0 / d_ml
        inv_mt = 1.0 / d_mt
        tau_qsl = numerator * max(inv_ml, inv_mt)
        dominant = Branch.ML if inv_ml >= inv_mt else Branch.MT

    logger.debug(f"{model.kind} tau={tau:.6g}: N={numerator:.6e} d_ml={d_ml:.6e} tau_qsl={tau_qsl:.6e}")
    return SpeedLimitReport(
        tau=tau,
        tau_d=tau_d,
        numerator=float(numerator),
        d_ml=d_ml,
        d_ml_loose=d_ml_loose,
        d_mt=d_mt,
        tau_qsl=float(tau_qsl),
        dominant=dominant,
        degenerate=degenerate,
    )


def qsl_ml_variant(
    model: ChannelModel,
    v0: BlochVector,
    tau: float,
    tau_d: float,
    spec: QuadratureSpec,
) -> Tuple[float, float]:
    """
    Both ML candidates: (N / avg(sum sigma_i rho_i), N / avg(sum sigma_i)).

    The first is the ML bound proper; the second (trace-norm) form is always
    smaller and is reported for diagnostics only.
    """
    report = qsl_unified(model, v0, tau, tau_d, spec)
    if report.degenerate:
        return 0.0, 0.0
    return report.numerator / report.d_ml, report.numerator / report.d_ml_loose


def qsl_jc_closed(
    p: DampedJCParams,
    tau: float,
    tau_d: float,
    spec: QuadratureSpec,
) -> float:
    """
    Closed form for the excited initial state:
    |(p_tau - p_end)(1 - 2 p_tau)| / (tau_d^-1 int |p'| dt).
    """
    _check_window(tau, tau_d)
    p_tau = jc_population(p, tau)
    p_end = jc_population(p, tau + tau_d)
    numerator = abs((p_tau - p_end) * (1.0 - 2.0 * p_tau))
    def speed_of(t: float) -> float:
        return abs(jc_population_derivative(p, t))

    window_spec = numerics.scaled_to_integrand(speed_of, tau, tau + tau_d, spec)
    speed = numerics.integrate(speed_of, tau, tau + tau_d, window_spec) / tau_d
    if numerator < DEGENERACY_TOL and speed < DEGENERACY_TOL:
        return 0.0
    return numerator / speed


def qsl_markov_jc(gamma0: float, tau: float, tau_d: float) -> float:
    """Constant-rate JC bound tau_d |1 - 2 e^(-gamma0 tau)|; zero at the critical time."""
    if gamma0 <= 0.0:
        raise ValueError(f"gamma0 must be positive, got {gamma0}")
    _check_window(tau, tau_d)
    return tau_d * abs(1.0 - 2.0 * math.exp(-gamma0 * tau))


def critical_time(gamma0: float) -> float:
    """tau_c = ln 2 / gamma0."""
    if gamma0 <= 0.0:
        raise ValueError(f"gamma0 must be positive, got {gamma0}")
    return math.log(2.0) / gamma0


def qsl_dephasing_closed(
    p: OhmicParams,
    coh: float,
    tau: float,
    tau_d: float,
    spec: QuadratureSpec,
) -> float:
    """
    Closed form C^(1/2) |q_tau q_end - q_tau^2| / (tau_d^-1 int |q'| dt).

    Independent of v_z; zero for an incoherent initial state.
    """
    if not 0.0 <= coh <= 1.0:
        raise ValueError(f"Coherence must lie in [0, 1], got {coh}")
    _check_window(tau, tau_d)
    if coh == 0.0:
        return 0.0
    q_tau = dephasing_coherence_factor(p, tau)
    q_end = dephasing_coherence_factor(p, tau + tau_d)
    numerator = math.sqrt(coh) * abs(q_tau * q_end - q_tau * q_tau)
    def speed_of(t: float) -> float:
        return abs(dephasing_coherence_derivative(p, t))

    window_spec = numerics.scaled_to_integrand(speed_of, tau, tau + tau_d, spec)
    speed = numerics.integrate(speed_of, tau, tau + tau_d, window_spec) / tau_d
    if numerator < DEGENERACY_TOL and speed < DEGENERACY_TOL:
        return 0.0
    return numerator / speed


def qsl_markov_dephasing(coh: float, q_tau: float, tau_d: float) -> float:
    """Monotone-coherence rewrite tau_d C^(1/2) q_tau."""
    if not 0.0 <= coh <= 1.0:
        raise ValueError(f"Coherence must lie in [0, 1], got {coh}")
    return tau_d * math.sqrt(coh) * q_tau
