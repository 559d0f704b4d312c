"""
qslkit Unruh Service
Initial-state map seen by a uniformly accelerated observer.

cos r = (exp(-2 pi varpi c / a) + 1)^(-1/2). The observed state keeps the
coherence phase and scales it by cos r, and moves weight into the excited
level: coherence cos^2 r (v_x^2 + v_y^2), excited population
1 - (1 + v_z) cos^2 r / 2.
"""

import math

from qslkit.models import BlochVector, QuadratureSpec, SpeedLimitReport, UnruhParams
from qslkit.services.channels import ChannelModel
from qslkit.services.speed_limit import qsl_unified


def cos_r(p: UnruhParams) -> float:
    """In (1/sqrt 2, 1]; 1 in the inertial limit a -> 0+."""
    return (math.exp(-2.0 * math.pi * p.varpi * p.c / p.a) + 1.0) ** -0.5


def transform_initial_state(v: BlochVector, p: UnruhParams) -> BlochVector:
    """(v_x cos r, v_y cos r, (1 + v_z) cos^2 r - 1)."""
    c = cos_r(p)
    return BlochVector(
        v_x=v.v_x * c,
        v_y=v.v_y * c,
        v_z=(1.0 + v.v_z) * c * c - 1.0,
    )


def qsl_in_accelerated_frame(
    model: ChannelModel,
    v0: BlochVector,
    p: UnruhParams,
    tau: float,
    tau_d: float,
    spec: QuadratureSpec,
) -> SpeedLimitReport:
    return qsl_unified(model, transform_initial_state(v0, p), tau, tau_d, spec)
