"""Closed-loop trot-in-place simulator.

The plant is the reduced pendulum propagated in closed form between step
boundaries; at every control tick the tracking QP turns the measured state
into a reference-velocity command, and at step boundaries the swing foot is
placed at the command-shaped capture point. Support exchange is instantaneous
and lossless, so per-axis orbital energy is constant between exchanges.

Frames: the trace records world-frame CoM and foot positions (the regulator
drives the world CoM toward the reference); pendulum quantities use the
foot-relative offset, recoverable as com - foot.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import mpc, qpsolver
from .kinematics import BodyPose, LinkLengths, leg_ik
from .model import (
    AxisState,
    PlanarState,
    Side,
    VlipParams,
    desired_capture_point,
    effective_gravity,
    integrate_axis,
    natural_frequency,
)

__all__ = [
    "GaitConfig",
    "SimRecord",
    "StepResult",
    "RunResult",
    "SweepRow",
    "SimulationError",
    "TRACE_COLUMNS",
    "step_exchange",
    "run_closed_loop",
    "thrust_sweep",
    "foot_targets_to_joints",
    "body_pose_for",
]

# CSV schema, bit-exact column order
TRACE_COLUMNS = (
    "t_s",
    "com_x_m",
    "com_y_m",
    "vel_x_mps",
    "vel_y_mps",
    "cp_x_m",
    "cp_y_m",
    "cmd_vx_mps",
    "cmd_vy_mps",
    "stance",
    "foot_x_m",
    "foot_y_m",
    "thrust_n",
    "qp_status",
    "qp_iterations",
)

SETTLE_RADIUS_M = 0.01  # |com| threshold used for settling-time reporting


class SimulationError(RuntimeError):
    """Raised when the QP fails mid-run; carries the tick and problem data."""

    def __init__(self, message: str, tick: int, problem=None, solution=None):
        super().__init__(message)
        self.tick = tick
        self.problem = problem
        self.solution = solution


@dataclass(frozen=True)
class GaitConfig:
    step_period_s: float = 0.3
    control_dt_s: float = 0.01
    sim_duration_s: float = 10.0
    v_ref_mps: tuple = (0.0, 0.0)
    foot_lateral_offset_m: float = 0.08
    foot_bound_m: float = 0.3

    def __post_init__(self):
        if not (self.step_period_s > 0.0 and self.control_dt_s > 0.0
                and self.sim_duration_s > 0.0 and self.foot_bound_m > 0.0):
            raise ValueError("gait durations and foot bound must be positive")
        if self.control_dt_s > self.step_period_s:
            raise ValueError("control_dt_s must not exceed step_period_s")
        if len(self.v_ref_mps) != 2:
            raise ValueError("v_ref_mps must have two components")

    def ticks_per_step(self) -> int:
        n = round(self.step_period_s / self.control_dt_s)
        if abs(n * self.control_dt_s - self.step_period_s) > 1e-9:
            raise ValueError(
                "step_period_s must be an integer multiple of control_dt_s")
        return n

    def total_ticks(self) -> int:
        n = round(self.sim_duration_s / self.control_dt_s)
        if abs(n * self.control_dt_s - self.sim_duration_s) > 1e-9:
            raise ValueError(
                "sim_duration_s must be an integer multiple of control_dt_s")
        return n


@dataclass(frozen=True)
class SimRecord:
    """One control tick of the trace; fields match TRACE_COLUMNS order."""

    t_s: float
    com_x_m: float
    com_y_m: float
    vel_x_mps: float
    vel_y_mps: float
    cp_x_m: float
    cp_y_m: float
    cmd_vx_mps: float
    cmd_vy_mps: float
    stance: str
    foot_x_m: float
    foot_y_m: float
    thrust_n: float
    qp_status: str
    qp_iterations: int

    def row(self) -> tuple:
        return tuple(getattr(self, name) for name in TRACE_COLUMNS)


@dataclass(frozen=True)
class StepResult:
    """Outcome of one support exchange, including saturation bookkeeping."""

    state: PlanarState
    cp_commanded: tuple
    cp_applied: tuple
    clamped: tuple  # per-axis bool


@dataclass(frozen=True)
class RunResult:
    records: list
    step_events: list = field(default_factory=list)  # (tick, StepResult)


@dataclass(frozen=True)
class SweepRow:
    thrust_n: float
    status: str
    gain_factor_sqrt_s2pm: float = math.nan
    natural_frequency_radps: float = math.nan
    max_abs_cp_m: float = math.nan
    settling_time_s: float = math.nan
    final_com_norm_m: float = math.nan


def step_exchange(state: PlanarState, params: VlipParams, gait: GaitConfig,
                  u_cmd=(0.0, 0.0)) -> StepResult:
    """Swap stance and swing feet, placing the new foot at the commanded
    capture point.

    The capture point is computed from the velocity error against the gait
    reference shifted by the controller command ``u_cmd``, clamped per axis to
    the foot bound; the frontal target also carries the alternating stance
    width. The CoM state is re-expressed relative to the new foot; velocity
    is continuous through the lossless exchange.
    """
    new_stance = state.stance.other()
    lateral = (gait.foot_lateral_offset_m if new_stance is Side.LEFT
               else -gait.foot_lateral_offset_m)
    gains = (params.gain_x, params.gain_y)
    cp_cmd = []
    cp_applied = []
    clamped = []
    new_axes = []
    for axis, axis_state in enumerate((state.x, state.y)):
        cp = desired_capture_point(
            axis_state, gait.v_ref_mps[axis] + u_cmd[axis], gains[axis], params)
        cp_cl = max(-gait.foot_bound_m, min(gait.foot_bound_m, cp))
        offset = cp_cl + (lateral if axis == 1 else 0.0)
        cp_cmd.append(cp)
        cp_applied.append(cp_cl)
        clamped.append(cp_cl != cp)
        new_axes.append(AxisState(p_m=-offset, v_mps=axis_state.v_mps))
    return StepResult(
        state=PlanarState(x=new_axes[0], y=new_axes[1], stance=new_stance),
        cp_commanded=tuple(cp_cmd),
        cp_applied=tuple(cp_applied),
        clamped=tuple(clamped),
    )


def run_closed_loop(params: VlipParams, gait: GaitConfig, weights: mpc.QpWeights,
                    *, use_qp: bool = True,
                    initial_com_m=(0.0, 0.0), initial_vel_mps=(0.0, 0.0),
                    initial_stance: Side = Side.RIGHT,
                    horizon: int = 50) -> RunResult:
    """Run the full control loop and return the tick-by-tick trace.

    With ``use_qp`` off the loop degenerates to plain capture-point stepping
    at the gait reference velocity (the comparison baseline).
    """
    ticks_per_step = gait.ticks_per_step()
    n_ticks = gait.total_ticks()
    dt = gait.control_dt_s
    cp_gain = math.sqrt(params.z0_m / effective_gravity(params))
    x_d = np.zeros(4)

    builder = None
    if use_qp:
        dm = mpc.discretize(mpc.build_state_space(params), dt)
        builder = mpc.TrackingQpBuilder(mpc.build_prediction(dm, horizon), weights)

    foot = [0.0, 0.0]
    com = [float(initial_com_m[0]), float(initial_com_m[1])]
    vel = [float(initial_vel_mps[0]), float(initial_vel_mps[1])]
    stance = initial_stance

    records = []
    step_events = []
    for tick in range(n_ticks):
        cp = (params.gain_x * (vel[0] - gait.v_ref_mps[0]) * cp_gain,
              params.gain_y * (vel[1] - gait.v_ref_mps[1]) * cp_gain)
        if use_qp:
            qp = builder.build(np.array([com[0], com[1], cp[0], cp[1]]), x_d)
            sol = qpsolver.solve(
                qpsolver.QpProblem(qp.P, qp.c, qp.A_in, qp.b_in))
            if sol.status is not qpsolver.QpStatus.OPTIMAL:
                raise SimulationError(
                    "tracking QP failed at tick %d (t=%.3f s): status %s, "
                    "KKT stationarity %.3e primal %.3e complementarity %.3e"
                    % (tick, tick * dt, sol.status.value, sol.kkt_stationarity,
                       sol.kkt_primal_feas, sol.kkt_complementarity),
                    tick=tick, problem=qp, solution=sol)
            u_cmd = (float(sol.u_star[0]), float(sol.u_star[1]))
            qp_status, qp_iters = sol.status.value, sol.iterations
        else:
            u_cmd = (0.0, 0.0)
            qp_status, qp_iters = "disabled", 0

        records.append(SimRecord(
            t_s=tick * dt,
            com_x_m=com[0], com_y_m=com[1],
            vel_x_mps=vel[0], vel_y_mps=vel[1],
            cp_x_m=cp[0], cp_y_m=cp[1],
            cmd_vx_mps=u_cmd[0], cmd_vy_mps=u_cmd[1],
            stance=stance.value,
            foot_x_m=foot[0], foot_y_m=foot[1],
            thrust_n=params.thrust_n,
            qp_status=qp_status, qp_iterations=qp_iters,
        ))

        for axis in range(2):
            st = integrate_axis(
                AxisState(p_m=com[axis] - foot[axis], v_mps=vel[axis]),
                params, dt)
            com[axis] = foot[axis] + st.p_m
            vel[axis] = st.v_mps

        if (tick + 1) % ticks_per_step == 0:
            planar = PlanarState(
                x=AxisState(com[0] - foot[0], vel[0]),
                y=AxisState(com[1] - foot[1], vel[1]),
                stance=stance)
            res = step_exchange(planar, params, gait, u_cmd=u_cmd)
            step_events.append((tick + 1, res))
            stance = res.state.stance
            foot[0] = com[0] - res.state.x.p_m
            foot[1] = com[1] - res.state.y.p_m
            vel[0] = res.state.x.v_mps
            vel[1] = res.state.y.v_mps

    return RunResult(records=records, step_events=step_events)


def _sweep_point(args):
    base, thrust, gait, weights, initial_com, initial_vel, horizon, keep = args
    try:
        params = replace(base, thrust_n=thrust)
        result = run_closed_loop(
            params, gait, weights, use_qp=True,
            initial_com_m=initial_com, initial_vel_mps=initial_vel,
            horizon=horizon)
    except (ValueError, SimulationError, OverflowError) as exc:
        return SweepRow(thrust_n=thrust, status="failed: %s" % exc), None
    records = result.records
    com_norm = [math.hypot(r.com_x_m, r.com_y_m) for r in records]
    settle = math.nan
    for i in range(len(records) - 1, -1, -1):
        if com_norm[i] > SETTLE_RADIUS_M:
            if i + 1 < len(records):
                settle = records[i + 1].t_s
            break
    else:
        settle = 0.0
    row = SweepRow(
        thrust_n=thrust,
        status="ok",
        gain_factor_sqrt_s2pm=math.sqrt(params.z0_m / effective_gravity(params)),
        natural_frequency_radps=natural_frequency(params),
        max_abs_cp_m=max(max(abs(r.cp_x_m), abs(r.cp_y_m)) for r in records),
        settling_time_s=settle,
        final_com_norm_m=com_norm[-1],
    )
    return row, (records if keep else None)


def thrust_sweep(base: VlipParams, thrusts, gait: GaitConfig,
                 weights: mpc.QpWeights, *, initial_com_m=(0.0, 0.0),
                 initial_vel_mps=(0.0, 0.0), horizon: int = 50,
                 jobs: int = 1, with_records: bool = False):
    """Rerun the closed loop across constant thrust settings.

    All runs start from identical initial conditions; per-point failures are
    recorded in their row and do not abort the sweep. Rows come back in the
    order the thrust values were given. With ``with_records`` the per-run
    traces are returned alongside each row (None for failed points).
    """
    work = [(base, float(th), gait, weights, tuple(initial_com_m),
             tuple(initial_vel_mps), horizon, with_records) for th in thrusts]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_sweep_point, work))
    else:
        results = [_sweep_point(w) for w in work]
    if with_records:
        return results
    return [row for row, _ in results]


def body_pose_for(record: SimRecord, params: VlipParams) -> BodyPose:
    """Upright torso pose implied by a trace record (CoM pinned at z0)."""
    return BodyPose.identity((record.com_x_m, record.com_y_m, params.z0_m))


def foot_targets_to_joints(record: SimRecord, pose: BodyPose,
                           links: LinkLengths) -> dict:
    """Joint angles for both legs at one trace record.

    The stance leg tracks the recorded foot position on the ground; the swing
    leg mirrors it through the CoM ground projection (the trot pairing).
    Unreachable targets raise OutOfWorkspaceError from the IK.
    """
    stance_side = Side(record.stance)
    stance_target = np.array([record.foot_x_m, record.foot_y_m, 0.0])
    swing_target = np.array([
        2.0 * record.com_x_m - record.foot_x_m,
        2.0 * record.com_y_m - record.foot_y_m,
        0.0,
    ])
    return {
        stance_side: leg_ik(stance_target, pose, links, stance_side),
        stance_side.other(): leg_ik(swing_target, pose, links,
                                    stance_side.other()),
    }
