"""Dense convex QP solver: predictor-corrector primal-dual interior point.

Solves  min_u  u' P u + c' u   s.t.  A_in u <= b_in   with P symmetric
positive definite. Note the objective carries no 1/2 factor, so stationarity
reads 2 P u + c + A_in' lam = 0; mixing this up with the 1/2 convention is
the classic silent bug, hence the explicit factor everywhere below.

The reduced Newton system is assembled densely and factorized with Cholesky,
which is the right trade for the ~100-variable box-constrained problems the
tracking controller produces. No global state: concurrent solves are safe.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.linalg import cho_factor, cho_solve

__all__ = ["QpProblem", "QpSolution", "QpStatus", "solve", "kkt_residuals"]

_SYM_TOL = 1e-10
_DUAL_BLOWUP = 1e10


class QpStatus(Enum):
    OPTIMAL = "optimal"
    MAX_ITERATIONS = "max_iterations"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True, eq=False)
class QpProblem:
    """Problem data; use m = 0 (empty A_in/b_in) for unconstrained solves."""

    P: np.ndarray
    c: np.ndarray
    A_in: np.ndarray
    b_in: np.ndarray

    def __post_init__(self):
        P = np.asarray(self.P, dtype=float)
        c = np.asarray(self.c, dtype=float).reshape(-1)
        n = c.shape[0]
        A = np.asarray(self.A_in, dtype=float).reshape(-1, n) if np.size(self.A_in) else np.zeros((0, n))
        b = np.asarray(self.b_in, dtype=float).reshape(-1)
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "A_in", A)
        object.__setattr__(self, "b_in", b)
        if P.shape != (n, n):
            raise ValueError("P must be n x n with n = len(c)")
        if np.max(np.abs(P - P.T), initial=0.0) > _SYM_TOL:
            raise ValueError("P must be symmetric to %g" % _SYM_TOL)
        if A.shape[0] != b.shape[0]:
            raise ValueError("A_in and b_in row counts differ")

    @property
    def n(self) -> int:
        return self.c.shape[0]

    @property
    def m(self) -> int:
        return self.b_in.shape[0]

    def objective(self, u: np.ndarray) -> float:
        u = np.asarray(u, dtype=float)
        return float(u @ self.P @ u + self.c @ u)


@dataclass(frozen=True, eq=False)
class QpSolution:
    u_star: np.ndarray
    lam: np.ndarray
    status: QpStatus
    iterations: int
    kkt_stationarity: float
    kkt_complementarity: float
    kkt_primal_feas: float
    # per-iteration diagnostics: (mu, objective, barrier-augmented objective)
    trace: tuple = field(default_factory=tuple)


def kkt_residuals(prob: QpProblem, u: np.ndarray, lam: np.ndarray):
    """(stationarity inf-norm, worst constraint violation, |lam' (b - A u)|)."""
    u = np.asarray(u, dtype=float).reshape(prob.n)
    lam = np.asarray(lam, dtype=float).reshape(prob.m)
    stat = 2.0 * prob.P @ u + prob.c
    if prob.m:
        stat = stat + prob.A_in.T @ lam
        slack = prob.b_in - prob.A_in @ u
        primal = max(0.0, float(np.max(-slack)))
        comp = abs(float(lam @ slack))
    else:
        primal = 0.0
        comp = 0.0
    return float(np.max(np.abs(stat), initial=0.0)), primal, comp


def _cholesky_jittered(M: np.ndarray):
    """Cholesky factor with escalating diagonal jitter on near-singular M."""
    jitter = 0.0
    for _ in range(6):
        try:
            return cho_factor(M + jitter * np.eye(M.shape[0]) if jitter else M,
                              lower=True, check_finite=False)
        except np.linalg.LinAlgError:
            jitter = max(1e-12, 10.0 * jitter) * max(1.0, float(np.max(np.diag(M))))
    raise np.linalg.LinAlgError("reduced KKT system is numerically singular")


def _max_step(z: np.ndarray, dz: np.ndarray) -> float:
    """Largest alpha in (0, 1] keeping z + alpha dz > 0."""
    neg = dz < 0.0
    if not np.any(neg):
        return 1.0
    return min(1.0, float(np.min(-z[neg] / dz[neg])))


def solve(prob: QpProblem, tol: float = 1e-9, max_iter: int = 50) -> QpSolution:
    """Solve the QP; OPTIMAL means all three KKT residuals are below tol.

    INFEASIBLE is declared when the primal residual stalls above tol while
    the duals blow up, which on a convex QP certifies an empty (or not
    strictly feasible) constraint set.
    """
    n, m = prob.n, prob.m
    twoP = 2.0 * prob.P

    if m == 0:
        u = cho_solve(_cholesky_jittered(twoP), -prob.c, check_finite=False)
        stat, pf, comp = kkt_residuals(prob, u, np.zeros(0))
        return QpSolution(
            u_star=u, lam=np.zeros(0), status=QpStatus.OPTIMAL, iterations=0,
            kkt_stationarity=stat, kkt_complementarity=comp, kkt_primal_feas=pf,
        )

    A, b = prob.A_in, prob.b_in
    u = np.zeros(n)
    s = np.maximum(b - A @ u, 1.0)
    lam = np.ones(m)
    trace = []

    status = QpStatus.MAX_ITERATIONS
    iterations = max_iter
    for k in range(max_iter):
        r_d = twoP @ u + prob.c + A.T @ lam
        r_p = A @ u + s - b
        mu = float(s @ lam) / m
        # b - A u = s - r_p, so the reported residuals come for free here
        true_slack = s - r_p
        stat = float(np.max(np.abs(r_d)))
        pf = max(0.0, float(np.max(-true_slack)))
        comp = abs(float(lam @ true_slack))
        obj = prob.objective(u)
        trace.append((mu, obj, obj - mu * float(np.sum(np.log(s)))))
        if stat <= tol and pf <= tol and comp <= tol:
            status = QpStatus.OPTIMAL
            iterations = k
            break
        if float(np.max(lam)) > _DUAL_BLOWUP and pf > tol:
            status = QpStatus.INFEASIBLE
            iterations = k
            break

        d = lam / s
        M = twoP + A.T @ (d[:, None] * A)
        L = _cholesky_jittered(M)

        def newton(r_c):
            rhs = -r_d + A.T @ ((r_c - lam * r_p) / s)
            du = cho_solve(L, rhs, check_finite=False)
            ds = -r_p - A @ du
            dlam = (-r_c - lam * ds) / s
            return du, ds, dlam

        # predictor: pure Newton step on the complementarity target 0
        du_a, ds_a, dlam_a = newton(s * lam)
        a_p = _max_step(s, ds_a)
        a_d = _max_step(lam, dlam_a)
        mu_aff = float((s + a_p * ds_a) @ (lam + a_d * dlam_a)) / m
        sigma = min(1.0, max(0.0, (mu_aff / mu) ** 3))

        # corrector: recenter and compensate the predicted second-order term
        du, ds, dlam = newton(s * lam - sigma * mu + ds_a * dlam_a)
        a_p = min(1.0, 0.995 * _max_step(s, ds))
        a_d = min(1.0, 0.995 * _max_step(lam, dlam))

        # safeguard: only accept steps that shrink the duality measure, so the
        # iterates walk down the central path monotonically. If damping the
        # Mehrotra step cannot achieve that (the second-order term can point
        # the wrong way), fall back to a plain centering step with equal step
        # lengths, for which a decrease is guaranteed at small enough steps.
        def mu_after(t):
            return float((s + t * a_p * ds) @ (lam + t * a_d * dlam)) / m

        t = 1.0
        for _ in range(8):
            if mu_after(t) < mu:
                break
            t *= 0.5
        else:
            du, ds, dlam = newton(s * lam - 0.9 * mu)
            a_p = a_d = min(1.0, 0.995 * min(_max_step(s, ds), _max_step(lam, dlam)))
            t = 1.0
            while mu_after(t) >= mu and t > 1e-8:
                t *= 0.5
        u = u + t * a_p * du
        s = s + t * a_p * ds
        lam = lam + t * a_d * dlam

    stat, pf, comp = kkt_residuals(prob, u, lam)
    if status is QpStatus.MAX_ITERATIONS:
        if stat <= tol and pf <= tol and comp <= tol:
            status = QpStatus.OPTIMAL
        elif float(np.max(lam)) > _DUAL_BLOWUP and pf > tol:
            status = QpStatus.INFEASIBLE
    return QpSolution(
        u_star=u, lam=lam, status=status, iterations=iterations,
        kkt_stationarity=stat, kkt_complementarity=comp, kkt_primal_feas=pf,
        trace=tuple(trace),
    )
