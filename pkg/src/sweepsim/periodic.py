"""Periodic solutions: generalized initial conditions, the discrete
period-T return map, fixed-point search inside the invariant region, planar
topological degree of the displacement field, and parameter continuation.

The return map is only continuous (no smoothness is available), so the
fixed-point search uses damped Picard iteration rather than Newton; a
nonzero boundary winding number certifies existence independently of
convergence of the iteration.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import FieldVanishesOnBoundary, MeshExhausted, NoConvergence
from .geometry import as_point
from .integrator import Trajectory, implicit_step, run
from .scenario import Fourier, PiecewiseLinear, SweepingScenario, omega_region

log = logging.getLogger(__name__)

DEFAULT_N_SCHEDULE = (128, 512, 2048)
MESH_CAP = 4096          # per-edge refinement cap for the winding computation
FIELD_FLOOR = 1e-9


@dataclass
class PeriodicOrbit:
    q_star: np.ndarray
    trajectory: Trajectory
    residual: float                 # ||x(T) - x(0)|| of the certifying run
    n_used: int
    lam: float
    degree_check: "DegreeResult | None" = None
    seed_distance: float | None = None   # max_t ||x(t) - seed|| for continuation


@dataclass
class DegreeResult:
    degree: int
    min_field_norm: float
    mesh_points: int
    polygon: list = field(default_factory=list)


def generalized_ic(scn: SweepingScenario, lam: float, q, tol: float = 1e-10) -> np.ndarray:
    """Feasible start V(q): the unique solution of
    ``v = proj(q, A + a(0) + c(v))``; equals q when q is already feasible."""
    v, _ = implicit_step(scn, lam, q, np.zeros(scn.dimension), 0.0, tol)
    return v


def poincare_map(scn: SweepingScenario, lam: float, n: int, q) -> np.ndarray:
    """x_n(T) of the n-step trajectory started from V(q)."""
    return run(scn, lam, q, n).x_nodes[-1].copy()


def _require_t_periodic(scn: SweepingScenario):
    def signal_periodic(sig):
        if sig is None:
            return True
        if isinstance(sig, Fourier):
            if sig.dim == 0:
                return True
            ratio = scn.period / sig.period
            return abs(ratio - round(ratio)) < 1e-9
        if isinstance(sig, PiecewiseLinear):
            return float(np.linalg.norm(sig.base_value(0.0) - sig.base_value(scn.period))) < 1e-12
        return False

    if not signal_periodic(scn.drift):
        raise ValueError("drift is not T-periodic; periodic search undefined")
    if not signal_periodic(scn.force.forcing):
        raise ValueError("forcing is not T-periodic; periodic search undefined")


def _picard_stage(scn, lam, n, q, tol, max_iter, omega, betas=(1.0, 0.5, 0.25)):
    """Damped fixed-point iteration of q -> P(V(q)) clamped to the invariant
    ball.  Returns (best_q, best_residual)."""
    best_q, best_r = q.copy(), np.inf
    for beta in betas:
        cur = best_q.copy()
        window: list[float] = []
        for _ in range(max_iter):
            image = poincare_map(scn, lam, n, cur)
            r = float(np.linalg.norm(image - cur))
            if r < best_r:
                best_r, best_q = r, cur.copy()
            if r <= tol:
                return best_q, best_r
            window.append(r)
            if len(window) > 12 and window[-1] > 0.999 * window[-13]:
                break   # stalled at this damping level
            cur = omega.project(cur + beta * (image - cur))
        if best_r <= tol:
            break
    return best_q, best_r


def find_periodic(scn: SweepingScenario, lam: float, tol: float,
                  n_schedule=DEFAULT_N_SCHEDULE, max_picard: int = 200,
                  q0=None, record_degree: bool = True) -> PeriodicOrbit:
    """Search for a period-T point of the discrete process inside the closed
    invariant ball, iterating through an ascending step-count schedule.

    Starts at the contraction fixed point unless q0 is given.  Raises
    NoConvergence (carrying the best residual) when the damped iteration
    cannot reach tol at the finest step count: existence is still guaranteed
    in the invariant ball, but the periodic point need not be attracting,
    in which case a degree computation plus bisection is the fallback.
    """
    _require_t_periodic(scn)
    n_schedule = tuple(sorted(n_schedule))
    omega = omega_region(scn, lam)
    q = as_point(q0) if q0 is not None else omega.center.copy()

    best_r = np.inf
    for idx, n in enumerate(n_schedule):
        final = idx == len(n_schedule) - 1
        budget = max_picard if final else min(max_picard, 60)
        q, best_r = _picard_stage(scn, lam, n, q, tol, budget, omega)

    n_fin = n_schedule[-1]
    traj = run(scn, lam, q, n_fin)
    residual = float(np.linalg.norm(traj.x_nodes[-1] - traj.x_nodes[0]))
    if residual > tol:
        raise NoConvergence(
            f"periodic search stalled at residual {residual:.3e} (target {tol:.3e})",
            residual=min(residual, best_r),
        )
    q_star = traj.x_nodes[0].copy()

    orbit = PeriodicOrbit(q_star=q_star, trajectory=traj, residual=residual,
                          n_used=n_fin, lam=float(lam))
    if record_degree and scn.dimension == 2:
        side = max(0.1, 20.0 * tol)
        square = [
            q_star + np.array([-side / 2, -side / 2]),
            q_star + np.array([side / 2, -side / 2]),
            q_star + np.array([side / 2, side / 2]),
            q_star + np.array([-side / 2, side / 2]),
        ]
        try:
            orbit.degree_check = degree_2d(scn, lam, n_schedule[0], square, mesh=64)
        except (FieldVanishesOnBoundary, MeshExhausted) as err:
            log.info("degree check skipped: %s", err)
    return orbit


def degree_2d(scn: SweepingScenario, lam: float, n: int, polygon,
              mesh: int = 64) -> DegreeResult:
    """Winding number of ``g(q) = q - P(V(q))`` around the polygon boundary.

    The boundary mesh is doubled until every consecutive angle increment is
    below pi/2, which pins the winding number; refuses (degree undefined)
    when the field norm drops below 1e-9 anywhere on the mesh.
    """
    if scn.dimension != 2:
        raise ValueError("degree computation is planar only")
    verts = [as_point(v) for v in polygon]
    if len(verts) < 3:
        raise ValueError("polygon needs at least 3 vertices")
    if mesh < 64:
        raise ValueError("need mesh >= 64 points per edge")

    n_edges = len(verts)
    per_edge: list[np.ndarray | None] = [None] * n_edges

    def g_of(p):
        return p - poincare_map(scn, lam, n, p)

    m = mesh
    while m <= MESH_CAP:
        for e in range(n_edges):
            a, b = verts[e], verts[(e + 1) % n_edges]
            fracs = np.arange(m) / m
            if per_edge[e] is None:
                per_edge[e] = np.array([g_of(a + f * (b - a)) for f in fracs])
            else:
                g_new = np.empty((m, 2))
                g_new[0::2] = per_edge[e]
                g_new[1::2] = [g_of(a + f * (b - a)) for f in fracs[1::2]]
                per_edge[e] = g_new

        g_all = np.vstack(per_edge)
        norms = np.linalg.norm(g_all, axis=1)
        min_norm = float(np.min(norms))
        if min_norm < FIELD_FLOOR:
            raise FieldVanishesOnBoundary(
                f"field norm {min_norm:.2e} on the boundary mesh; degree undefined"
            )
        theta = np.arctan2(g_all[:, 1], g_all[:, 0])
        dtheta = np.diff(np.append(theta, theta[0]))
        dtheta = (dtheta + np.pi) % (2.0 * np.pi) - np.pi
        if np.max(np.abs(dtheta)) < np.pi / 2.0:
            degree = int(round(float(np.sum(dtheta)) / (2.0 * np.pi)))
            return DegreeResult(degree=degree, min_field_norm=min_norm,
                                mesh_points=g_all.shape[0],
                                polygon=[v.tolist() for v in verts])
        m *= 2
    raise MeshExhausted(f"angle criterion unmet at {MESH_CAP} points per edge")


def continue_branch(scn: SweepingScenario, lambda_grid, seed_q, tol: float,
                    n_schedule=DEFAULT_N_SCHEDULE, max_picard: int = 200,
                    warm_start: bool = True, threads: int | None = None
                    ) -> list[PeriodicOrbit]:
    """Periodic orbits along an ascending lambda grid, warm-starting each
    solve from the previous orbit.  Per-lambda failures are logged and
    skipped, not fatal.  With warm_start=False the solves are independent
    and may run on a thread pool."""
    grid = [float(v) for v in lambda_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("lambda grid must be strictly ascending")
    seed_q = as_point(seed_q)

    def solve(lam, q0):
        orbit = find_periodic(scn, lam, tol, n_schedule, max_picard, q0=q0)
        orbit.seed_distance = float(
            np.max(np.linalg.norm(orbit.trajectory.x_nodes - seed_q, axis=1))
        )
        return orbit

    results: list[PeriodicOrbit] = []
    if warm_start:
        q = seed_q
        for lam in grid:
            try:
                orbit = solve(lam, q)
            except NoConvergence as err:
                log.warning("lambda=%g did not converge: %s", lam, err)
                continue
            results.append(orbit)
            q = orbit.q_star
    else:
        with ThreadPoolExecutor(max_workers=threads or 1) as pool:
            futures = [(lam, pool.submit(solve, lam, seed_q)) for lam in grid]
            for lam, fut in futures:
                try:
                    results.append(fut.result())
                except NoConvergence as err:
                    log.warning("lambda=%g did not converge: %s", lam, err)
    return results
