"""Capture-point tracking model and its condensed finite-horizon QP.

Builds the four-state model [com_x, com_y, cp_x, cp_y] driven by reference
velocity commands, discretizes it exactly (zero-order hold, closed form per
axis block), stacks the horizon into prediction matrices, and condenses the
tracking objective into dense QP data that :mod:`cpwalk.qpsolver` consumes.

Objective convention: the condensed problem is ``min u' P u + c' u`` (no 1/2
factor), so the gradient is ``2 P u + c``. The solver uses the same form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import VlipParams, natural_frequency

__all__ = [
    "CpStateSpace",
    "DiscreteModel",
    "PredictionMatrices",
    "CondensedQp",
    "QpWeights",
    "build_state_space",
    "discretize",
    "build_prediction",
    "build_qp",
    "TrackingQpBuilder",
]

NX = 4  # state: [com_x, com_y, cp_x, cp_y]
NU = 2  # input: [v_cmd_x, v_cmd_y]


@dataclass(frozen=True, eq=False)
class CpStateSpace:
    """Continuous model: com follows the commanded velocity channel, the
    capture point integrates the position through the axis gain. Axes are
    fully decoupled."""

    A: np.ndarray  # 4x4
    B: np.ndarray  # 4x2

    def __post_init__(self):
        object.__setattr__(self, "A", np.asarray(self.A, dtype=float))
        object.__setattr__(self, "B", np.asarray(self.B, dtype=float))
        if self.A.shape != (NX, NX) or self.B.shape != (NX, NU):
            raise ValueError("CpStateSpace needs A 4x4 and B 4x2")

    def axis_block(self, axis: int) -> np.ndarray:
        """The 2x2 [[0, w], [K w, 0]] block of one axis (0 = x, 1 = y)."""
        idx = np.array([axis, 2 + axis])
        return self.A[np.ix_(idx, idx)]


@dataclass(frozen=True, eq=False)
class DiscreteModel:
    """Exact zero-order-hold pair for the capture-point model."""

    Ad: np.ndarray
    Bd: np.ndarray
    dt_s: float

    def __post_init__(self):
        object.__setattr__(self, "Ad", np.asarray(self.Ad, dtype=float))
        object.__setattr__(self, "Bd", np.asarray(self.Bd, dtype=float))
        if self.Ad.shape != (NX, NX) or self.Bd.shape != (NX, NU):
            raise ValueError("DiscreteModel needs Ad 4x4 and Bd 4x2")
        if not (self.dt_s > 0.0):
            raise ValueError("dt_s must be positive")


@dataclass(frozen=True, eq=False)
class PredictionMatrices:
    """Stacked horizon maps: states = F x0 + G inputs."""

    F: np.ndarray  # 4(N+1) x 4
    G: np.ndarray  # 4(N+1) x 2N
    horizon: int


@dataclass(frozen=True, eq=False)
class CondensedQp:
    """Dense tracking QP: min u' P u + c' u  s.t.  A_in u <= b_in."""

    P: np.ndarray
    c: np.ndarray
    A_in: np.ndarray
    b_in: np.ndarray


@dataclass(frozen=True, eq=False)
class QpWeights:
    """Diagonal tracking weights, per-step input weight, and input box bound."""

    Q_state: np.ndarray
    R_input: np.ndarray
    u_bound_mps: float

    def __post_init__(self):
        q = np.asarray(self.Q_state, dtype=float)
        r = np.asarray(self.R_input, dtype=float)
        object.__setattr__(self, "Q_state", q)
        object.__setattr__(self, "R_input", r)
        if q.shape != (NX, NX) or r.shape != (NU, NU):
            raise ValueError("Q_state must be 4x4 and R_input 2x2")
        if np.any(q != np.diag(np.diag(q))) or np.any(r != np.diag(np.diag(r))):
            raise ValueError("Q_state and R_input must be diagonal")
        if np.any(np.diag(q) < 0.0):
            raise ValueError("Q_state diagonal must be non-negative")
        if np.any(np.diag(r) <= 0.0):
            raise ValueError("R_input diagonal must be strictly positive")
        if not (self.u_bound_mps > 0.0):
            raise ValueError("u_bound_mps must be positive")

    @classmethod
    def from_diagonals(cls, q_diag, r_diag, u_bound_mps: float) -> "QpWeights":
        return cls(np.diag(np.asarray(q_diag, dtype=float)),
                   np.diag(np.asarray(r_diag, dtype=float)),
                   float(u_bound_mps))


def default_weights() -> QpWeights:
    """Default tracking tuning: position errors dominate, inputs damped."""
    return QpWeights.from_diagonals((100.0, 100.0, 0.1, 0.1), (50.0, 55.0), 0.5)


def build_state_space(params: VlipParams) -> CpStateSpace:
    """Assemble the decoupled two-axis capture-point model from the
    pendulum constants."""
    omega = natural_frequency(params)
    A = np.zeros((NX, NX))
    A[0, 2] = omega
    A[1, 3] = omega
    A[2, 0] = params.gain_x * omega
    A[3, 1] = params.gain_y * omega
    B = np.zeros((NX, NU))
    B[0, 0] = 1.0
    B[1, 1] = 1.0
    return CpStateSpace(A=A, B=B)


def _zoh_axis(omega: float, gain: float, dt: float):
    """Closed-form ZOH of one axis block [[0, w], [K w, 0]], input on the
    position row.

    Eigenvalues are +/- w*sqrt(K), giving cosh/sinh expressions; the K = 0
    block is nilpotent and handled by the same truncated series, which is
    exact there.
    """
    mu = omega * math.sqrt(gain)
    x = mu * dt
    if x < 1e-6:
        # series in (mu dt); exact for the nilpotent gain = 0 case
        x2 = x * x
        ch = 1.0 + x2 / 2.0 + x2 * x2 / 24.0
        sh_over_mu = dt * (1.0 + x2 / 6.0 + x2 * x2 / 120.0)
        cosh_m1_over_mu2 = dt * dt * (0.5 + x2 / 24.0 + x2 * x2 / 720.0)
    else:
        ch = math.cosh(x)
        sh_over_mu = math.sinh(x) / mu
        cosh_m1_over_mu2 = (ch - 1.0) / (mu * mu)
    ad = np.array(
        [
            [ch, omega * sh_over_mu],
            [gain * omega * sh_over_mu, ch],
        ]
    )
    bd = np.array([sh_over_mu, gain * omega * cosh_m1_over_mu2])
    return ad, bd


def discretize(ss: CpStateSpace, dt: float) -> DiscreteModel:
    """Exact zero-order-hold discretization of the capture-point model."""
    if not (dt > 0.0):
        raise ValueError("dt must be positive")
    omega = ss.A[0, 2]
    Ad = np.zeros((NX, NX))
    Bd = np.zeros((NX, NU))
    for axis in range(2):
        gain = ss.A[2 + axis, axis] / omega
        ad, bd = _zoh_axis(omega, gain, dt)
        idx = np.array([axis, 2 + axis])
        Ad[np.ix_(idx, idx)] = ad
        Bd[idx, axis] = bd
    return DiscreteModel(Ad=Ad, Bd=Bd, dt_s=dt)


def build_prediction(dm: DiscreteModel, N: int) -> PredictionMatrices:
    """Stack the N-step state recursion into x = F x0 + G u.

    F holds the powers [I; Ad; ...; Ad^N]; G is the block lower-triangular
    convolution of Bd with those powers (top block row is zero).
    """
    if N < 1:
        raise ValueError("horizon must be at least 1")
    powers = [np.eye(NX)]
    for _ in range(N):
        powers.append(dm.Ad @ powers[-1])
    F = np.vstack(powers)
    G = np.zeros((NX * (N + 1), NU * N))
    for i in range(1, N + 1):
        for j in range(i):
            G[NX * i : NX * (i + 1), NU * j : NU * (j + 1)] = (
                powers[i - 1 - j] @ dm.Bd
            )
    return PredictionMatrices(F=F, G=G, horizon=N)


class TrackingQpBuilder:
    """Precomputes the state-independent QP pieces for a fixed model/weights.

    P, the input box, and the c-map 2 G' Qbar F are constant across control
    ticks; only c depends on the measured state, so the per-tick work is one
    small matrix-vector product.
    """

    def __init__(self, pm: PredictionMatrices, w: QpWeights):
        N = pm.horizon
        Qbar = np.kron(np.eye(N + 1), w.Q_state)
        Rbar = np.kron(np.eye(N), w.R_input)
        GtQ = pm.G.T @ Qbar
        P = GtQ @ pm.G + Rbar
        P = 0.5 * (P + P.T)
        try:
            np.linalg.cholesky(P)
        except np.linalg.LinAlgError as exc:
            raise ValueError("condensed cost matrix is not positive definite") from exc
        n = NU * N
        self.P = P
        self.c_map = 2.0 * (GtQ @ pm.F)
        self.A_in = np.vstack([np.eye(n), -np.eye(n)])
        self.b_in = np.full(2 * n, w.u_bound_mps)

    def build(self, x0: np.ndarray, xd: np.ndarray) -> CondensedQp:
        x0 = np.asarray(x0, dtype=float).reshape(NX)
        xd = np.asarray(xd, dtype=float).reshape(NX)
        c = self.c_map @ (x0 - xd)
        return CondensedQp(P=self.P, c=c, A_in=self.A_in, b_in=self.b_in)


def build_qp(
    pm: PredictionMatrices, w: QpWeights, x0: np.ndarray, xd: np.ndarray
) -> CondensedQp:
    """Condense the tracking objective around (x0 - xd) with input box bounds."""
    return TrackingQpBuilder(pm, w).build(x0, xd)
