"""Leg chain kinematics: body -> pelvis -> hip -> knee -> foot, plus the
thruster mount point.

The chain composes a frontal hip roll, a sagittal hip pitch, and a sagittal
knee pitch. The shank is a parallel linkage, so the knee-to-foot vector in
the knee frame is [-l4a cos(phi_k), 0, -(l4b + l4a sin(phi_k))] rather than a
plain rotated segment. The right leg mirrors every link's frontal (y)
component.

The inverse map is closed form: the frontal projection fixes the hip roll,
then the sagittal plane reduces to a two-link problem in the parallel-linkage
geometry. Two knee branches solve it; the knee-forward one is returned so
results are deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import Side

__all__ = [
    "LinkLengths",
    "LegJointAngles",
    "BodyPose",
    "FkResult",
    "JointLimits",
    "DEFAULT_JOINT_LIMITS",
    "OutOfWorkspaceError",
    "rot_x",
    "rot_y",
    "fk_chain",
    "leg_ik",
]

_ORTHO_TOL = 1e-10


def rot_x(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot_y(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


@dataclass(frozen=True, eq=False)
class LinkLengths:
    """Constant link vectors (left-leg convention) and the two shank segment
    lengths of the parallel linkage. All in meters, local frames."""

    l1_body_to_pelvis: np.ndarray
    l2_pelvis_to_hip: np.ndarray
    l3_hip_to_knee: np.ndarray
    l4a: float
    l4b: float
    lt_body_to_thruster: np.ndarray

    def __post_init__(self):
        for name in ("l1_body_to_pelvis", "l2_pelvis_to_hip", "l3_hip_to_knee",
                     "lt_body_to_thruster"):
            vec = np.asarray(getattr(self, name), dtype=float).reshape(3)
            if not np.all(np.isfinite(vec)):
                raise ValueError("%s must be finite" % name)
            object.__setattr__(self, name, vec)
        if not (self.l4a > 0.0 and self.l4b > 0.0):
            raise ValueError("l4a and l4b must be positive")

    @classmethod
    def default(cls) -> "LinkLengths":
        # Representative proportions for a ~0.6 m platform standing crouched
        # at a 0.5 m CoM height; not measured hardware values. Override from
        # the config file for a real robot.
        return cls(
            l1_body_to_pelvis=np.array([0.0, 0.06, -0.10]),
            l2_pelvis_to_hip=np.array([0.0, 0.04, -0.03]),
            l3_hip_to_knee=np.array([0.0, 0.0, -0.26]),
            l4a=0.06,
            l4b=0.26,
            lt_body_to_thruster=np.array([0.0, 0.12, 0.05]),
        )

    def mirrored(self, side: Side):
        """Link vectors with the frontal component flipped for the right leg."""
        if side is Side.LEFT:
            return (self.l1_body_to_pelvis, self.l2_pelvis_to_hip,
                    self.l3_hip_to_knee, self.lt_body_to_thruster)
        flip = np.array([1.0, -1.0, 1.0])
        return (self.l1_body_to_pelvis * flip, self.l2_pelvis_to_hip * flip,
                self.l3_hip_to_knee * flip, self.lt_body_to_thruster * flip)


@dataclass(frozen=True)
class LegJointAngles:
    """Hip roll (frontal), hip pitch (sagittal), knee pitch (sagittal) [rad]."""

    gamma_h: float
    phi_h: float
    phi_k: float

    def __post_init__(self):
        if not all(map(math.isfinite, (self.gamma_h, self.phi_h, self.phi_k))):
            raise ValueError("joint angles must be finite")


@dataclass(frozen=True)
class JointLimits:
    """Box limits [rad]; enforced by callers, not by the kinematics itself.

    The default knee range stays on one side of the parallel-linkage stretch
    singularity (at asin-reach turnover), where the inverse map is unique.
    """

    gamma_h: tuple = (-0.6, 0.6)
    phi_h: tuple = (-1.0, 1.0)
    phi_k: tuple = (-0.85, 0.2)

    def contains(self, q: LegJointAngles) -> bool:
        return (self.gamma_h[0] <= q.gamma_h <= self.gamma_h[1]
                and self.phi_h[0] <= q.phi_h <= self.phi_h[1]
                and self.phi_k[0] <= q.phi_k <= self.phi_k[1])


DEFAULT_JOINT_LIMITS = JointLimits()


@dataclass(frozen=True, eq=False)
class BodyPose:
    """Torso position and orientation in the world frame."""

    position: np.ndarray
    rotation: np.ndarray

    def __post_init__(self):
        pos = np.asarray(self.position, dtype=float).reshape(3)
        rot = np.asarray(self.rotation, dtype=float).reshape(3, 3)
        object.__setattr__(self, "position", pos)
        object.__setattr__(self, "rotation", rot)
        if np.max(np.abs(rot.T @ rot - np.eye(3))) > _ORTHO_TOL:
            raise ValueError("rotation must be orthonormal to %g" % _ORTHO_TOL)
        if abs(np.linalg.det(rot) - 1.0) > _ORTHO_TOL:
            raise ValueError("rotation must be proper (det +1)")

    @classmethod
    def identity(cls, position=(0.0, 0.0, 0.0)) -> "BodyPose":
        return cls(position=np.asarray(position, dtype=float), rotation=np.eye(3))


@dataclass(frozen=True, eq=False)
class FkResult:
    pelvis: np.ndarray
    hip: np.ndarray
    knee: np.ndarray
    foot: np.ndarray
    thruster: np.ndarray


class OutOfWorkspaceError(ValueError):
    """Raised when a foot target is unreachable; carries the nearest
    reachable target so callers can degrade gracefully."""

    def __init__(self, message: str, clamped_target: np.ndarray):
        super().__init__(message)
        self.clamped_target = np.asarray(clamped_target, dtype=float)


def shank_vector(links: LinkLengths, phi_k: float) -> np.ndarray:
    """Knee-to-foot vector in the knee frame for the parallel linkage."""
    return np.array([
        -links.l4a * math.cos(phi_k),
        0.0,
        -(links.l4b + links.l4a * math.sin(phi_k)),
    ])


def fk_chain(pose: BodyPose, joints: LegJointAngles, links: LinkLengths,
             side: Side) -> FkResult:
    """Positions of pelvis, hip, knee, foot and thruster in the world frame."""
    l1, l2, l3, lt = links.mirrored(side)
    R_b = pose.rotation
    R_roll = R_b @ rot_x(joints.gamma_h)
    R_thigh = R_roll @ rot_y(joints.phi_h)
    pelvis = pose.position + R_b @ l1
    hip = pelvis + R_roll @ l2
    knee = hip + R_thigh @ l3
    foot = knee + R_thigh @ rot_y(joints.phi_k) @ shank_vector(links, joints.phi_k)
    thruster = pose.position + R_b @ lt
    return FkResult(pelvis=pelvis, hip=hip, knee=knee, foot=foot, thruster=thruster)


def _wrap_angle(a: float) -> float:
    return math.atan2(math.sin(a), math.cos(a))


def _planar_reach(links: LinkLengths, a_x: float, a_z: float):
    """Min/max squared radius of the sagittal subchain knee+shank.

    The squared hip-to-foot distance in the pitch plane is
    C0 + alpha sin(phi_k) + beta cos(phi_k), so the reachable band follows
    directly from the amplitude of the sinusoid.
    """
    c0 = (a_x * a_x + a_z * a_z + links.l4a**2 + links.l4b**2
          - 2.0 * a_x * links.l4a)
    alpha = 2.0 * links.l4b * (links.l4a - a_x)
    beta = -2.0 * links.l4b * a_z
    amp = math.hypot(alpha, beta)
    return c0, alpha, beta, amp


def leg_ik(foot_target: np.ndarray, pose: BodyPose, links: LinkLengths,
           side: Side) -> LegJointAngles:
    """Closed-form inverse kinematics for one leg.

    Raises OutOfWorkspaceError for unreachable targets, attaching the nearest
    reachable point (scaled back onto the workspace boundary with a small
    interior margin).
    """
    target = np.asarray(foot_target, dtype=float).reshape(3)
    l1, l2, l3, _ = links.mirrored(side)
    # target expressed in the body frame, pelvis-relative
    t = pose.rotation.T @ (target - pose.position) - l1

    y_off = l2[1] + l3[1]
    rho_sq = t[1] * t[1] + t[2] * t[2]
    c0, alpha, beta, amp = _planar_reach(links, l3[0], l3[2])

    if rho_sq < y_off * y_off:
        clamped = _clamp_lateral(t, y_off, l1, l2, l3, links, pose)
        raise OutOfWorkspaceError(
            "foot target is laterally out of reach: frontal-plane distance "
            "%.4f m is inside the fixed lateral offset %.4f m"
            % (math.sqrt(max(rho_sq, 0.0)), abs(y_off)),
            clamped,
        )

    # hip roll aligns the frontal projection; the foot hangs below the hip
    s_z = -math.sqrt(rho_sq - y_off * y_off)
    gamma = math.atan2(t[2], t[1]) - math.atan2(s_z, y_off)
    gamma = _wrap_angle(gamma)

    w = rot_x(-gamma) @ t - l2
    w_x, w_z = w[0], w[2]
    r_sq = w_x * w_x + w_z * w_z
    rhs = r_sq - c0

    if abs(rhs) > amp:
        # radially out of the reachable band: scale the planar radius onto it
        r_lo = math.sqrt(max(c0 - amp, 0.0))
        r_hi = math.sqrt(c0 + amp)
        r = math.sqrt(r_sq)
        r_new = min(max(r, r_lo * (1.0 + 1e-9) + 1e-12), r_hi * (1.0 - 1e-9))
        scale = r_new / r if r > 0.0 else 0.0
        w_fixed = np.array([w_x * scale, w[1], w_z * scale])
        t_fixed = rot_x(gamma) @ (l2 + w_fixed)
        clamped = pose.position + pose.rotation @ (t_fixed + l1)
        raise OutOfWorkspaceError(
            "foot target is radially out of reach: planar distance %.4f m "
            "outside [%.4f, %.4f] m" % (math.sqrt(r_sq), r_lo, r_hi),
            clamped,
        )

    # Two knee angles reach this radius, mirrored about the stretch turning
    # point of the parallel linkage. The principal-asin candidate is always
    # the branch on the zero-pose side (knee ahead of the foot); returning it
    # keeps the solver deterministic.
    base = math.asin(max(-1.0, min(1.0, rhs / amp))) if amp > 0.0 else 0.0
    delta = math.atan2(beta, alpha)
    phi_k = _wrap_angle(base - delta)
    q_x = -(links.l4a + links.l4b * math.sin(phi_k))
    q_z = -links.l4b * math.cos(phi_k)
    v_x, v_z = l3[0] + q_x, l3[2] + q_z
    phi_h = _wrap_angle(math.atan2(v_z, v_x) - math.atan2(w_z, w_x))
    return LegJointAngles(gamma_h=gamma, phi_h=phi_h, phi_k=phi_k)


def _clamp_lateral(t, y_off, l1, l2, l3, links, pose) -> np.ndarray:
    """Nearest reachable point when the frontal projection is too close to
    the roll axis: push it out to the lateral offset circle at mid reach."""
    rho = math.hypot(t[1], t[2])
    r_mid_sq = max(_planar_reach(links, l3[0], l3[2])[0], 0.0)
    s_z = -math.sqrt(0.5 * r_mid_sq)
    rho_new = math.hypot(y_off, s_z)
    if rho > 0.0:
        ty, tz = t[1] * rho_new / rho, t[2] * rho_new / rho
    else:
        ty, tz = y_off, s_z
    t_fixed = np.array([t[0], ty, tz])
    return pose.position + pose.rotation @ (t_fixed + l1)
