"""Implicit catching-up integrator for the moving-constraint process.

One step advances the auxiliary state u by projecting onto the translated
body, with the translation depending implicitly on the new state through the
contraction; the implicit equation is solved by Picard iteration, which
contracts at rate L2 < 1.  The physical state x and the cumulative force
integral J are linked to u by ``x_i = u_i - J(t_{i-1})``.

J is accumulated with the composite trapezoid rule on the piecewise-linear
x built so far, matching the one-interval lag of the step equation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExhausted, NonConvergence
from .geometry import as_point
from .scenario import SweepingScenario, drift_variation_bound

IMPLICIT_MAX_ITER = 100_000
DEFAULT_STEP_TOL = 1e-10


@dataclass
class StepRecord:
    fixed_point_iters: int
    step_increment: float          # ||u_{i+1} - u_i||
    bound: float                   # (var(a, [t_i, t_{i+1}]) + L1 T/n) / (1 - L2)


@dataclass
class Trajectory:
    n: int
    times: np.ndarray              # (n+1,)
    u_nodes: np.ndarray            # (n+1, d)
    x_nodes: np.ndarray            # (n+1, d)
    J_nodes: np.ndarray            # (n+1, d), J(t_i) = integral of f over [0, t_i]
    lam: float
    per_step: list[StepRecord] = field(default_factory=list)
    residual_history: list[float] | None = None   # set by refine()

    def value_at(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        """Piecewise-linear (u, x) between nodes."""
        t = float(t)
        if t <= self.times[0]:
            return self.u_nodes[0].copy(), self.x_nodes[0].copy()
        if t >= self.times[-1]:
            return self.u_nodes[-1].copy(), self.x_nodes[-1].copy()
        i = int(np.searchsorted(self.times, t, side="right")) - 1
        frac = (t - self.times[i]) / (self.times[i + 1] - self.times[i])
        u = self.u_nodes[i] + frac * (self.u_nodes[i + 1] - self.u_nodes[i])
        x = self.x_nodes[i] + frac * (self.x_nodes[i + 1] - self.x_nodes[i])
        return u, x


def implicit_step(scn: SweepingScenario, lam: float, u_prev, J_prev, t_next: float,
                  tol: float = DEFAULT_STEP_TOL) -> tuple[np.ndarray, int]:
    """Solve ``v = proj(u_prev, A + a(t_next) + c(v - J_prev) + J_prev)``.

    Picard iteration on v; each sweep is an L2-contraction, so stopping when
    consecutive iterates differ by <= tol*(1-L2) leaves the fixed-point error
    below tol (geometric tail).
    """
    u_prev = as_point(u_prev)
    J_prev = as_point(J_prev) if np.ndim(J_prev) else np.zeros_like(u_prev)
    a_next = scn.drift_at(t_next, lam)
    body = scn.body
    L2 = scn.L2
    stop = tol * (1.0 - L2)

    v = u_prev.copy()
    for k in range(1, IMPLICIT_MAX_ITER + 1):
        shift = a_next + scn.contraction_at(v - J_prev, lam) + J_prev
        v_next = body.project(u_prev - shift) + shift
        if float(np.linalg.norm(v_next - v)) <= stop:
            return v_next, k
        v = v_next
    raise NonConvergence(
        "implicit step stalled; declared L2 likely violated",
        residual=float(np.linalg.norm(v_next - v)),
    )


def run(scn: SweepingScenario, lam: float, q, n: int,
        step_tol: float = DEFAULT_STEP_TOL) -> Trajectory:
    """Integrate over [0, T] with n uniform steps from initial condition q.

    q may be infeasible: it is first mapped to the feasible start
    ``V(q) = proj(q, A + a(0) + c(V(q)))`` (the t=0 implicit solve).
    """
    if n < 1:
        raise ValueError("need n >= 1 steps")
    q = as_point(q)
    d = scn.dimension
    T = scn.period
    dt = T / n
    times = np.linspace(0.0, T, n + 1)

    u = np.zeros((n + 1, d))
    x = np.zeros((n + 1, d))
    J = np.zeros((n + 1, d))
    records: list[StepRecord] = []

    zero = np.zeros(d)
    v0, _ = implicit_step(scn, lam, q, zero, 0.0, step_tol)
    u[0] = v0
    x[0] = v0

    L2 = scn.L2
    f_prev = scn.force_at(times[0], x[0], lam)
    J_running = zero.copy()
    for i in range(n):
        if i >= 1:
            f_cur = scn.force_at(times[i], x[i], lam)
            J_running = J_running + 0.5 * dt * (f_prev + f_cur)
            f_prev = f_cur
        J[i] = J_running

        v, iters = implicit_step(scn, lam, u[i], J_running, times[i + 1], step_tol)
        u[i + 1] = v
        x[i + 1] = v - J_running

        inc = float(np.linalg.norm(u[i + 1] - u[i]))
        var = drift_variation_bound(scn.drift, times[i], times[i + 1])
        records.append(StepRecord(
            fixed_point_iters=iters,
            step_increment=inc,
            bound=(var + scn.L1 * T / n) / (1.0 - L2),
        ))

    f_cur = scn.force_at(times[n], x[n], lam)
    J[n] = J_running + 0.5 * dt * (f_prev + f_cur)

    return Trajectory(n=n, times=times, u_nodes=u, x_nodes=x, J_nodes=J,
                      lam=float(lam), per_step=records)


def refine(scn: SweepingScenario, lam: float, q, tol: float,
           n0: int = 64, n_max: int = 16384) -> Trajectory:
    """Double the step count until consecutive trajectories agree at common
    nodes within tol; returns the finest trajectory with the residual history
    attached.  Raises BudgetExhausted (with the last residual) at n_max: the
    scheme guarantees subsequence convergence but no rate, so rough drifts
    may legitimately exhaust the budget.
    """
    if n0 < 8:
        raise ValueError("need n0 >= 8")
    step_tol = tol / 100.0
    history: list[float] = []
    coarse = run(scn, lam, q, n0, step_tol)
    n = n0
    while 2 * n <= n_max:
        n *= 2
        fine = run(scn, lam, q, n, step_tol)
        gap = float(np.max(np.linalg.norm(fine.x_nodes[::2] - coarse.x_nodes, axis=1)))
        history.append(gap)
        if gap <= tol:
            fine.residual_history = history
            return fine
        coarse = fine
    raise BudgetExhausted(
        f"refinement reached n={n} with residual {history[-1]:.3e} > tol={tol:.3e}",
        residual=history[-1] if history else None,
    )


def moreau_residual(traj: Trajectory, scn: SweepingScenario, lam: float) -> float:
    """Signed slack of the discrete energy inequality over [0, T].

    Uses the selector ``phi(t_i) = b0 + a(t_i) + c(x_i) + J(t_{i-1})`` (a
    member of the discrete moving set by construction, with J(t_{-1}) := 0)
    and returns ``sum_i <phi(t_i), u_{i+1} - u_i> - (||u_n||^2 - ||u_0||^2)/2``.
    Valid trajectories keep the slack above ``-moreau_epsilon(traj)``.
    """
    b0 = scn.interior_point
    total = 0.0
    for i in range(traj.n):
        J_lag = traj.J_nodes[i - 1] if i >= 1 else np.zeros(scn.dimension)
        phi = b0 + scn.drift_at(traj.times[i], lam) \
            + scn.contraction_at(traj.x_nodes[i], lam) + J_lag
        total += float(phi @ (traj.u_nodes[i + 1] - traj.u_nodes[i]))
    u0 = float(traj.u_nodes[0] @ traj.u_nodes[0])
    un = float(traj.u_nodes[-1] @ traj.u_nodes[-1])
    return total - 0.5 * (un - u0)


def moreau_epsilon(traj: Trajectory) -> float:
    """Admissible negative slack: total u-variation times the largest step."""
    incs = [rec.step_increment for rec in traj.per_step]
    if not incs:
        return 0.0
    return float(sum(incs)) * float(max(incs))


def step_variation_check(traj: Trajectory, slack: float = 1e-7) -> bool:
    """Every recorded step increment is within its per-step bound."""
    return all(rec.step_increment <= rec.bound + slack for rec in traj.per_step)
