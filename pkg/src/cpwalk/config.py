"""Plain-text run configuration: parsing, validation, and scaffolding.

The file is INI-style with four parameter blocks plus the scenario. Every key
carries its SI unit in the name. Unknown or missing keys are reported by name
with the expected unit so unit mistakes surface immediately instead of
becoming silent misconfigurations.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass

import numpy as np

from .kinematics import LinkLengths
from .model import VlipParams
from .mpc import QpWeights
from .sim import GaitConfig

__all__ = ["ConfigError", "ScenarioConfig", "RunConfig", "load_config",
           "default_config_text"]


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ScenarioConfig:
    """Initial CoM offset and velocity; the stance foot starts at the origin."""

    initial_com_m: tuple = (0.0, 0.0)
    initial_vel_mps: tuple = (0.0, 0.0)


@dataclass(frozen=True)
class RunConfig:
    params: VlipParams
    gait: GaitConfig
    weights: QpWeights
    horizon: int
    links: LinkLengths
    scenario: ScenarioConfig

    def resolved(self) -> dict:
        """Flat view of every effective value, for run manifests."""
        p, g, w, s = self.params, self.gait, self.weights, self.scenario
        return {
            "model": {
                "mass_kg": p.mass_kg, "z0_m": p.z0_m,
                "gravity_mps2": p.gravity_mps2, "thrust_n": p.thrust_n,
                "thrust_pitch_rad": p.thrust_pitch_rad,
                "gain_x": p.gain_x, "gain_y": p.gain_y,
            },
            "gait": {
                "step_period_s": g.step_period_s,
                "control_dt_s": g.control_dt_s,
                "sim_duration_s": g.sim_duration_s,
                "v_ref_x_mps": g.v_ref_mps[0], "v_ref_y_mps": g.v_ref_mps[1],
                "foot_lateral_offset_m": g.foot_lateral_offset_m,
                "foot_bound_m": g.foot_bound_m,
            },
            "weights": {
                "q_diag": list(np.diag(w.Q_state)),
                "r_diag": list(np.diag(w.R_input)),
                "horizon": self.horizon,
                "u_bound_mps": w.u_bound_mps,
            },
            "links": {
                "l1_body_to_pelvis_m": list(self.links.l1_body_to_pelvis),
                "l2_pelvis_to_hip_m": list(self.links.l2_pelvis_to_hip),
                "l3_hip_to_knee_m": list(self.links.l3_hip_to_knee),
                "l4a_m": self.links.l4a, "l4b_m": self.links.l4b,
                "lt_body_to_thruster_m": list(self.links.lt_body_to_thruster),
            },
            "scenario": {
                "initial_com_x_m": s.initial_com_m[0],
                "initial_com_y_m": s.initial_com_m[1],
                "initial_vel_x_mps": s.initial_vel_mps[0],
                "initial_vel_y_mps": s.initial_vel_mps[1],
            },
        }


# (section, key) -> (unit, kind); kind: "float", "int", "vec3"
_SCHEMA = {
    ("model", "mass_kg"): ("kg", "float"),
    ("model", "z0_m"): ("m", "float"),
    ("model", "gravity_mps2"): ("m/s^2", "float"),
    ("model", "thrust_n"): ("N", "float"),
    ("model", "thrust_pitch_rad"): ("rad", "float"),
    ("model", "gain_x"): ("dimensionless", "float"),
    ("model", "gain_y"): ("dimensionless", "float"),
    ("gait", "step_period_s"): ("s", "float"),
    ("gait", "control_dt_s"): ("s", "float"),
    ("gait", "sim_duration_s"): ("s", "float"),
    ("gait", "v_ref_x_mps"): ("m/s", "float"),
    ("gait", "v_ref_y_mps"): ("m/s", "float"),
    ("gait", "foot_lateral_offset_m"): ("m", "float"),
    ("gait", "foot_bound_m"): ("m", "float"),
    ("weights", "q_diag"): ("4 comma-separated weights", "vec"),
    ("weights", "r_diag"): ("2 comma-separated weights", "vec"),
    ("weights", "horizon"): ("steps", "int"),
    ("weights", "u_bound_mps"): ("m/s", "float"),
    ("links", "l1_body_to_pelvis_m"): ("m, 3 comma-separated", "vec3"),
    ("links", "l2_pelvis_to_hip_m"): ("m, 3 comma-separated", "vec3"),
    ("links", "l3_hip_to_knee_m"): ("m, 3 comma-separated", "vec3"),
    ("links", "l4a_m"): ("m", "float"),
    ("links", "l4b_m"): ("m", "float"),
    ("links", "lt_body_to_thruster_m"): ("m, 3 comma-separated", "vec3"),
    ("scenario", "initial_com_x_m"): ("m", "float"),
    ("scenario", "initial_com_y_m"): ("m", "float"),
    ("scenario", "initial_vel_x_mps"): ("m/s", "float"),
    ("scenario", "initial_vel_y_mps"): ("m/s", "float"),
}


def _get(cp: configparser.ConfigParser, section: str, key: str):
    unit, kind = _SCHEMA[(section, key)]
    try:
        raw = cp.get(section, key)
    except (configparser.NoSectionError, configparser.NoOptionError):
        raise ConfigError(
            "missing config key [%s] %s (expected %s)" % (section, key, unit)
        ) from None
    try:
        if kind == "float":
            return float(raw)
        if kind == "int":
            return int(raw)
        parts = [float(x) for x in raw.split(",")]
        if kind == "vec3" and len(parts) != 3:
            raise ValueError("needs exactly 3 components")
        return parts
    except ValueError as exc:
        raise ConfigError(
            "invalid value for [%s] %s = %r (expected %s): %s"
            % (section, key, raw, unit, exc)
        ) from None


def load_config(path) -> RunConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",))
    read = cp.read(str(path))
    if not read:
        raise ConfigError("config file not found or unreadable: %s" % path)

    for section in cp.sections():
        for key in cp.options(section):
            if (section, key) not in _SCHEMA:
                raise ConfigError(
                    "unknown config key [%s] %s; remove it or fix the spelling"
                    % (section, key))

    try:
        params = VlipParams(
            mass_kg=_get(cp, "model", "mass_kg"),
            z0_m=_get(cp, "model", "z0_m"),
            gravity_mps2=_get(cp, "model", "gravity_mps2"),
            thrust_n=_get(cp, "model", "thrust_n"),
            thrust_pitch_rad=_get(cp, "model", "thrust_pitch_rad"),
            gain_x=_get(cp, "model", "gain_x"),
            gain_y=_get(cp, "model", "gain_y"),
        )
        gait = GaitConfig(
            step_period_s=_get(cp, "gait", "step_period_s"),
            control_dt_s=_get(cp, "gait", "control_dt_s"),
            sim_duration_s=_get(cp, "gait", "sim_duration_s"),
            v_ref_mps=(_get(cp, "gait", "v_ref_x_mps"),
                       _get(cp, "gait", "v_ref_y_mps")),
            foot_lateral_offset_m=_get(cp, "gait", "foot_lateral_offset_m"),
            foot_bound_m=_get(cp, "gait", "foot_bound_m"),
        )
        q_diag = _get(cp, "weights", "q_diag")
        r_diag = _get(cp, "weights", "r_diag")
        if len(q_diag) != 4:
            raise ConfigError("[weights] q_diag needs 4 entries")
        if len(r_diag) != 2:
            raise ConfigError("[weights] r_diag needs 2 entries")
        weights = QpWeights.from_diagonals(
            q_diag, r_diag, _get(cp, "weights", "u_bound_mps"))
        horizon = _get(cp, "weights", "horizon")
        if horizon < 1:
            raise ConfigError("[weights] horizon must be at least 1")
        links = LinkLengths(
            l1_body_to_pelvis=np.array(_get(cp, "links", "l1_body_to_pelvis_m")),
            l2_pelvis_to_hip=np.array(_get(cp, "links", "l2_pelvis_to_hip_m")),
            l3_hip_to_knee=np.array(_get(cp, "links", "l3_hip_to_knee_m")),
            l4a=_get(cp, "links", "l4a_m"),
            l4b=_get(cp, "links", "l4b_m"),
            lt_body_to_thruster=np.array(_get(cp, "links", "lt_body_to_thruster_m")),
        )
        scenario = ScenarioConfig(
            initial_com_m=(_get(cp, "scenario", "initial_com_x_m"),
                           _get(cp, "scenario", "initial_com_y_m")),
            initial_vel_mps=(_get(cp, "scenario", "initial_vel_x_mps"),
                             _get(cp, "scenario", "initial_vel_y_mps")),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return RunConfig(params=params, gait=gait, weights=weights,
                     horizon=horizon, links=links, scenario=scenario)


def default_config_text() -> str:
    """Fully commented default configuration, parseable back to defaults."""
    return """\
# cpwalk run configuration. All values in SI units; the unit is part of the
# key name. Edit freely; unknown keys are rejected to catch typos.

[model]
# Reduced pendulum constants.
mass_kg = 4.5
z0_m = 0.5                 # constant CoM height above the stance foot
gravity_mps2 = 9.81
thrust_n = 0.0             # combined thruster magnitude; must stay below weight
thrust_pitch_rad = 0.0     # thrust tilt from vertical (plant-side disturbance)
gain_x = 1.0               # capture-point velocity gains
gain_y = 1.0

[gait]
step_period_s = 0.3        # support exchange interval
control_dt_s = 0.01        # control tick, also the QP discretization step
sim_duration_s = 10.0
v_ref_x_mps = 0.0          # reference CoM velocity (trot in place = 0)
v_ref_y_mps = 0.0
foot_lateral_offset_m = 0.08   # alternating trot stance half-width
foot_bound_m = 0.3         # per-axis step length saturation

[weights]
# Tracking QP tuning: state weights on [com_x, com_y, cp_x, cp_y], per-step
# input weights, horizon length, and the box bound on each velocity command.
q_diag = 100, 100, 0.1, 0.1
r_diag = 50, 55
horizon = 50
u_bound_mps = 0.5

[links]
# Leg geometry (left-leg convention; the right leg mirrors y). These are
# representative proportions for a ~0.6 m platform crouched at z0, not
# measured hardware.
l1_body_to_pelvis_m = 0.0, 0.06, -0.10
l2_pelvis_to_hip_m = 0.0, 0.04, -0.03
l3_hip_to_knee_m = 0.0, 0.0, -0.26
l4a_m = 0.06               # parallel-linkage shank segments
l4b_m = 0.26
lt_body_to_thruster_m = 0.0, 0.12, 0.05

[scenario]
# Initial condition: CoM offset/velocity with the stance foot at the origin.
initial_com_x_m = 0.05
initial_com_y_m = 0.0
initial_vel_x_mps = 0.0
initial_vel_y_mps = 0.0
"""
