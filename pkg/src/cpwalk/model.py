"""Reduced walking model: a constant-height inverted pendulum with body thrust.

Vertical thrust offloads part of the robot's weight, so the pendulum falls
under a reduced effective gravity ("virtual buoyancy"). That single scalar
drives everything here: the natural frequency drops, the capture point
stretches, and the orbital energy picks up the reduced constant. All types
are immutable values and all operations are pure functions, so the module is
safe to use from any number of threads.

Axis convention: each horizontal axis (sagittal x, frontal y) is an
independent scalar pendulum; ``AxisState`` holds the CoM offset from the
stance foot and its velocity for one axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "Side",
    "VlipParams",
    "AxisState",
    "PlanarState",
    "effective_gravity",
    "natural_frequency",
    "vlip_accel",
    "orbital_energy",
    "capture_point",
    "desired_capture_point",
    "integrate_axis",
]


class Side(Enum):
    """Which leg: used both for stance bookkeeping and kinematic mirroring."""

    LEFT = "left"
    RIGHT = "right"

    def other(self) -> "Side":
        return Side.RIGHT if self is Side.LEFT else Side.LEFT


@dataclass(frozen=True)
class VlipParams:
    """Physical constants of the thrust-assisted pendulum.

    ``thrust_n`` is the combined magnitude of all thrusters; ``thrust_pitch_rad``
    is its tilt from vertical (0 = straight up). Construction fails when the
    vertical thrust component cancels the weight, because the model is only
    defined while the effective gravity stays strictly positive.
    """

    mass_kg: float = 4.5
    z0_m: float = 0.5
    gravity_mps2: float = 9.81
    thrust_n: float = 0.0
    thrust_pitch_rad: float = 0.0
    gain_x: float = 1.0
    gain_y: float = 1.0

    def __post_init__(self):
        if not (self.mass_kg > 0.0):
            raise ValueError("mass_kg must be positive")
        if not (self.z0_m > 0.0):
            raise ValueError("z0_m must be positive")
        if not (self.gravity_mps2 > 0.0):
            raise ValueError("gravity_mps2 must be positive")
        if self.thrust_n < 0.0:
            raise ValueError("thrust_n must be non-negative")
        if self.gain_x < 0.0 or self.gain_y < 0.0:
            raise ValueError("capture-point gains must be non-negative")
        lift = self.thrust_n * math.cos(self.thrust_pitch_rad)
        weight = self.mass_kg * self.gravity_mps2
        if lift >= weight:
            raise ValueError(
                "virtual buoyancy violation: vertical thrust %.6g N cancels or "
                "exceeds weight %.6g N, effective gravity must stay positive"
                % (lift, weight)
            )


@dataclass(frozen=True)
class AxisState:
    """CoM offset from the stance foot and CoM velocity along one axis."""

    p_m: float
    v_mps: float

    def __post_init__(self):
        if not (math.isfinite(self.p_m) and math.isfinite(self.v_mps)):
            raise ValueError("AxisState requires finite position and velocity")


@dataclass(frozen=True)
class PlanarState:
    """Both horizontal axes plus which foot currently carries the robot."""

    x: AxisState
    y: AxisState
    stance: Side


def effective_gravity(params: VlipParams) -> float:
    """Gravity minus the per-mass vertical thrust component [m/s^2]."""
    return params.gravity_mps2 - (
        params.thrust_n * math.cos(params.thrust_pitch_rad) / params.mass_kg
    )


def natural_frequency(params: VlipParams) -> float:
    """Pendulum frequency sqrt(g_eff / z0) [rad/s]; thrust slows it down."""
    return math.sqrt(effective_gravity(params) / params.z0_m)


def vlip_accel(state: AxisState, params: VlipParams) -> float:
    """Horizontal CoM acceleration for one axis [m/s^2].

    The restoring (actually repelling) term scales with the offset from the
    stance foot; a tilted thrust adds a constant forcing term.
    """
    forcing = params.thrust_n * math.sin(params.thrust_pitch_rad) / params.mass_kg
    return (state.p_m / params.z0_m) * effective_gravity(params) + forcing


def orbital_energy(state: AxisState, params: VlipParams) -> float:
    """Conserved pendulum energy per unit mass [J/kg], vertical-thrust model.

    Positive: the CoM carries enough speed to pass over the foot. Negative:
    it stalls and reverses first. Zero: it comes to rest exactly above the
    foot. Defined for the untilted-thrust model; any tilt forcing is ignored.
    """
    g_eff = effective_gravity(params)
    return 0.5 * state.v_mps**2 - 0.5 * g_eff * state.p_m**2 / params.z0_m


def capture_point(state: AxisState, params: VlipParams) -> float:
    """Foot offset that zeroes the orbital energy: v * sqrt(z0 / g_eff) [m]."""
    return state.v_mps * math.sqrt(params.z0_m / effective_gravity(params))


def desired_capture_point(
    state: AxisState, v_ref: float, gain: float, params: VlipParams
) -> float:
    """Capture point for tracking a reference velocity [m].

    Scales the velocity error instead of the raw velocity, so stepping to it
    steers the CoM toward ``v_ref``; with ``gain=1`` and ``v_ref=0`` this is
    exactly :func:`capture_point`.
    """
    return (
        gain
        * (state.v_mps - v_ref)
        * math.sqrt(params.z0_m / effective_gravity(params))
    )


def integrate_axis(state: AxisState, params: VlipParams, dt: float) -> AxisState:
    """Propagate one axis of the plant by ``dt`` using the exact solution.

    The axis dynamics are a linear second-order ODE with constant forcing, so
    the flow has a closed hyperbolic form; no numeric integrator error enters
    and orbital energy is conserved exactly (untilted thrust). A non-finite
    result raises OverflowError rather than being clamped.
    """
    if dt < 0.0:
        raise ValueError("dt must be non-negative")
    omega = natural_frequency(params)
    forcing = params.thrust_n * math.sin(params.thrust_pitch_rad) / params.mass_kg
    # Shift by the forced equilibrium -forcing/omega^2 to reduce to q'' = omega^2 q.
    shift = forcing / (omega * omega)
    q0 = state.p_m + shift
    try:
        ch = math.cosh(omega * dt)
        sh = math.sinh(omega * dt)
        p = q0 * ch + (state.v_mps / omega) * sh - shift
        v = q0 * omega * sh + state.v_mps * ch
    except OverflowError as exc:
        raise OverflowError(
            "plant propagation blew up: omega*dt = %.6g" % (omega * dt)
        ) from exc
    if not (math.isfinite(p) and math.isfinite(v)):
        raise OverflowError(
            "plant propagation produced non-finite state (p=%r, v=%r)" % (p, v)
        )
    return AxisState(p_m=p, v_mps=v)
