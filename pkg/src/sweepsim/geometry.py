"""Convex-body geometry: exact projections, support functions, Hausdorff
distance, normal-cone residuals, and the brute-force oracles the test suite
uses as independent ground truth.

Bodies are immutable after construction.  All operations are pure functions
of their inputs and safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, linprog, nnls
from scipy.special import ndtri

from .errors import (
    DimensionTooLarge,
    NonConvergence,
    NotFound,
    PointOutsideBody,
    ZeroDirection,
)

# Tolerance ladder: closed-form projections are exact to rounding; the
# iterative (Dykstra) projection is driven well below every downstream test
# slack so that two projection errors never add up past 1e-9.
EXACT_TOL = 1e-10
DYKSTRA_TOL = 1e-10
DYKSTRA_MAX_CYCLES = 100_000
MEMBERSHIP_TOL = 1e-8


def as_point(p) -> np.ndarray:
    """Coerce to a finite 1-D float array."""
    arr = np.atleast_1d(np.asarray(p, dtype=float)).ravel()
    if not np.all(np.isfinite(arr)):
        raise ValueError("point has non-finite entries")
    return arr


class ConvexBody:
    """Base class for the nonempty closed convex bounded body catalog."""

    dim: int

    def project(self, p) -> np.ndarray:
        raise NotImplementedError

    def support(self, direction) -> float:
        raise NotImplementedError

    def translate(self, shift) -> "ConvexBody":
        raise NotImplementedError

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        """Axis-aligned (lower, upper) box guaranteed to contain the body."""
        raise NotImplementedError

    def contains_mask(self, points: np.ndarray) -> np.ndarray:
        """Vectorized algebraic membership for an (m, d) array of points."""
        raise NotImplementedError

    def sample_points(self, k: int, rng: np.random.Generator) -> np.ndarray:
        """k member points (not necessarily uniform)."""
        raise NotImplementedError


class Ball(ConvexBody):
    def __init__(self, center, radius):
        self.center = as_point(center)
        self.radius = float(radius)
        if self.radius < 0:
            raise ValueError("radius must be >= 0")
        self.dim = self.center.size

    def __repr__(self):
        return f"Ball(center={self.center.tolist()}, radius={self.radius})"

    def project(self, p):
        p = as_point(p)
        v = p - self.center
        nv = float(np.linalg.norm(v))
        if nv <= self.radius:
            return p.copy()
        if self.radius == 0.0:
            return self.center.copy()
        return self.center + (self.radius / nv) * v

    def support(self, direction):
        direction = as_point(direction)
        return float(self.center @ direction) + self.radius * float(np.linalg.norm(direction))

    def translate(self, shift):
        return Ball(self.center + as_point(shift), self.radius)

    def bounding_box(self):
        return self.center - self.radius, self.center + self.radius

    def contains_mask(self, points):
        return np.linalg.norm(points - self.center, axis=1) <= self.radius + 1e-12

    def sample_points(self, k, rng):
        z = rng.standard_normal((k, self.dim))
        z /= np.maximum(np.linalg.norm(z, axis=1, keepdims=True), 1e-300)
        r = self.radius * rng.random(k) ** (1.0 / max(self.dim, 1))
        return self.center + z * r[:, None]


class Box(ConvexBody):
    def __init__(self, lower, upper):
        self.lower = as_point(lower)
        self.upper = as_point(upper)
        if self.lower.size != self.upper.size:
            raise ValueError("lower/upper dimension mismatch")
        if np.any(self.lower > self.upper):
            raise ValueError("box requires lower <= upper componentwise")
        self.dim = self.lower.size

    def __repr__(self):
        return f"Box(lower={self.lower.tolist()}, upper={self.upper.tolist()})"

    def project(self, p):
        return np.clip(as_point(p), self.lower, self.upper)

    def support(self, direction):
        direction = as_point(direction)
        return float(np.sum(np.maximum(self.lower * direction, self.upper * direction)))

    def translate(self, shift):
        shift = as_point(shift)
        return Box(self.lower + shift, self.upper + shift)

    def bounding_box(self):
        return self.lower.copy(), self.upper.copy()

    def contains_mask(self, points):
        return np.all((points >= self.lower - 1e-12) & (points <= self.upper + 1e-12), axis=1)

    def sample_points(self, k, rng):
        u = rng.random((k, self.dim))
        return self.lower + u * (self.upper - self.lower)


class HalfspacePolytope(ConvexBody):
    """Intersection of halfspaces ``<n_j, x> <= b_j``.

    Feasibility is certified at construction by ``interior_point``;
    ``bounding_radius`` promises the body lies in the origin-centered ball of
    that radius.  Row normals are normalized to unit length so tolerance
    checks are scale-free.  Degenerate (flat) bodies such as thickness-1e-6
    segments are accepted.
    """

    def __init__(self, rows, bounding_radius, interior_point):
        normals = []
        offsets = []
        for idx, (normal, offset) in enumerate(rows):
            n = as_point(normal)
            nn = float(np.linalg.norm(n))
            if nn == 0.0:
                raise ValueError(f"row {idx}: zero normal")
            normals.append(n / nn)
            offsets.append(float(offset) / nn)
        self.normals = np.array(normals, dtype=float)
        self.offsets = np.array(offsets, dtype=float)
        self.bounding_radius = float(bounding_radius)
        if self.bounding_radius <= 0:
            raise ValueError("bounding_radius must be positive")
        self.interior_point = as_point(interior_point)
        self.dim = self.normals.shape[1]
        if self.interior_point.size != self.dim:
            raise ValueError("interior_point dimension mismatch")
        viol = self.normals @ self.interior_point - self.offsets
        if np.max(viol) > 1e-9:
            raise ValueError(
                f"interior_point violates row {int(np.argmax(viol))} by {np.max(viol):.3e}"
            )

    def __repr__(self):
        return f"HalfspacePolytope({len(self.offsets)} rows, R={self.bounding_radius})"

    def project(self, p, tol=DYKSTRA_TOL, max_cycles=DYKSTRA_MAX_CYCLES):
        """Dykstra's alternating projections over the halfspaces, finished by
        a KKT-certified active-set polish.

        At the end of every Dykstra cycle the iterate satisfies the exact
        stationarity identity ``x = p - sum_j mu_j n_j`` with mu_j >= 0, so
        once the cycle's tight rows match the true active set, the projection
        onto their affine hull passes the full KKT test (feasibility,
        nonnegative multipliers, complementary slackness) and is returned
        exactly.  If the polish keeps failing, the iteration stops on the
        certified duality-gap bound ``||x - x*|| <= sqrt(2 kappa)``.
        """
        p = as_point(p)
        viol0 = self.normals @ p - self.offsets
        if float(np.max(viol0)) <= 0.0:
            return p.copy()
        x = p.copy()
        m = self.normals.shape[0]
        corrections = np.zeros((m, self.dim))
        moved = np.inf
        for cycle in range(max_cycles):
            x_prev = x.copy()
            for j in range(m):
                w = x + corrections[j]
                viol = float(self.normals[j] @ w) - self.offsets[j]
                if viol > 0.0:
                    x = w - viol * self.normals[j]
                else:
                    x = w
                corrections[j] = w - x
            moved = float(np.linalg.norm(x - x_prev))

            slack = self.offsets - self.normals @ x
            mu = np.linalg.norm(corrections, axis=1)   # corrections[j] = mu_j n_j
            deep = cycle % 8 == 7   # widen the active-set search periodically
            polished = self._kkt_polish(p, slack, mu, deep=deep)
            if polished is not None:
                return polished

            # duality gap: x = p - sum mu_j n_j exactly, so the suboptimality
            # is at most kappa = sum mu_j * slack_j for feasible x
            worst = float(-np.min(slack))
            kappa = float(mu @ np.maximum(slack, 0.0))
            if worst <= tol and kappa <= 0.5 * tol * tol:
                return x
        raise NonConvergence(
            f"Dykstra projection did not converge in {max_cycles} cycles", residual=moved
        )

    def _kkt_polish(self, p, slack, mu, deep=False):
        """Exact finish: guess the active set from the current slacks and
        Dykstra multipliers, project onto its affine hull, and verify KKT.

        Near-degenerate vertices (an almost-tight extra row) defeat any
        single guess, so a deep pass also prunes rows one or two at a time.
        """
        scale = 1.0 + float(np.linalg.norm(p)) + float(np.max(np.abs(self.offsets)))
        guesses = [
            np.where(slack < 1e-9 * scale)[0],
            np.where(slack < 1e-7 * scale)[0],
        ]
        tried = set()
        for rows in guesses:
            key = tuple(rows)
            if key and key not in tried:
                tried.add(key)
                cand = self._try_active_set(p, rows, scale)
                if cand is not None:
                    return cand
        if not deep:
            return None
        wide = np.where((slack < 1e-4 * scale) | (mu > 1e-10))[0]
        subsets = [tuple(wide)]
        subsets += [tuple(r for r in wide if r != drop) for drop in wide]
        if len(wide) <= 6:
            subsets += [tuple(r for r in wide if r not in (a, b))
                        for i, a in enumerate(wide) for b in wide[i + 1:]]
        for key in subsets:
            if key and key not in tried:
                tried.add(key)
                cand = self._try_active_set(p, np.array(key), scale)
                if cand is not None:
                    return cand
        return None

    def _try_active_set(self, p, rows, scale):
        """Project p onto the affine hull of the given rows and verify the
        full KKT system (feasibility, nonnegative multipliers on exactly the
        tight rows); success certifies the exact projection."""
        n_act = self.normals[rows]
        b_act = self.offsets[rows]
        gram = n_act @ n_act.T
        rhs = n_act @ p - b_act
        lam, *_ = np.linalg.lstsq(gram, rhs, rcond=None)
        cand = p - n_act.T @ lam

        if float(np.max(np.abs(n_act @ cand - b_act))) > 1e-10 * scale:
            return None   # inconsistent equality system: wrong guess
        if float(np.max(self.normals @ cand - self.offsets)) > 1e-11 * scale:
            return None
        mu, res = nnls(n_act.T, p - cand)
        if res > 1e-10 * scale:
            return None
        used = mu > 1e-10 * scale
        if np.any(np.abs(n_act[used] @ cand - b_act[used]) > 1e-10 * scale):
            return None
        return cand

    def support(self, direction):
        direction = as_point(direction)
        if float(np.linalg.norm(direction)) == 0.0:
            raise ZeroDirection("support direction must be nonzero")
        # The body is promised to lie in the bounding ball, so the box bound
        # below never cuts it; it only guards the LP against unbounded rays.
        r = self.bounding_radius + 1.0
        res = linprog(
            -direction,
            A_ub=self.normals,
            b_ub=self.offsets,
            bounds=[(-r, r)] * self.dim,
            method="highs",
        )
        if res.status != 0:
            raise NonConvergence(f"support LP failed with status {res.status}")
        return float(-res.fun)

    def translate(self, shift):
        shift = as_point(shift)
        rows = [
            (self.normals[j], self.offsets[j] + float(self.normals[j] @ shift))
            for j in range(self.normals.shape[0])
        ]
        return HalfspacePolytope(
            rows,
            self.bounding_radius + float(np.linalg.norm(shift)),
            self.interior_point + shift,
        )

    def bounding_box(self):
        r = self.bounding_radius
        return np.full(self.dim, -r), np.full(self.dim, r)

    def contains_mask(self, points):
        return np.all(points @ self.normals.T <= self.offsets + 1e-12, axis=1)

    def sample_points(self, k, rng):
        # Dykstra-projected box samples: members of the body, not uniform.
        lo, hi = self.bounding_box()
        raw = lo + rng.random((k, self.dim)) * (hi - lo)
        return np.array([self.project(x) for x in raw])


class Ellipsoid(ConvexBody):
    """Body ``(x - c)^T M^{-1} (x - c) <= 1`` for symmetric positive-definite M."""

    def __init__(self, center, shape_matrix):
        self.center = as_point(center)
        m = np.asarray(shape_matrix, dtype=float)
        if m.shape != (self.center.size, self.center.size):
            raise ValueError("shape_matrix must be d x d")
        if not np.allclose(m, m.T, atol=1e-12):
            raise ValueError("shape_matrix must be symmetric")
        evals, evecs = np.linalg.eigh(m)
        if np.min(evals) <= 0:
            raise ValueError("shape_matrix must be positive definite")
        self.shape_matrix = m
        self._axes_sq = evals            # semi-axis lengths squared
        self._basis = evecs              # columns: principal directions
        self.dim = self.center.size

    def __repr__(self):
        return f"Ellipsoid(center={self.center.tolist()})"

    def _quad(self, p):
        y = self._basis.T @ (as_point(p) - self.center)
        return float(np.sum(y * y / self._axes_sq))

    def project(self, p):
        p = as_point(p)
        y = self._basis.T @ (p - self.center)
        if np.sum(y * y / self._axes_sq) <= 1.0:
            return p.copy()

        # Euclidean projection: y_i(t) = y_i * a_i^2 / (a_i^2 + t) with the
        # multiplier t > 0 solving the monotone secular equation g(t) = 0.
        a2 = self._axes_sq

        def g(t):
            return float(np.sum(y * y * a2 / (a2 + t) ** 2)) - 1.0

        t_hi = float(np.sqrt(np.sum(y * y * a2)))  # g(t_hi) <= 0 by construction
        t_star = brentq(g, 0.0, t_hi + 1.0, xtol=1e-15, rtol=8.9e-16, maxiter=200)
        y_proj = y * a2 / (a2 + t_star)
        return self.center + self._basis @ y_proj

    def support(self, direction):
        direction = as_point(direction)
        return float(self.center @ direction) + float(
            np.sqrt(direction @ self.shape_matrix @ direction)
        )

    def translate(self, shift):
        return Ellipsoid(self.center + as_point(shift), self.shape_matrix)

    def bounding_box(self):
        half = np.sqrt(np.diag(self.shape_matrix))
        return self.center - half, self.center + half

    def contains_mask(self, points):
        y = (points - self.center) @ self._basis
        return np.sum(y * y / self._axes_sq, axis=1) <= 1.0 + 1e-12

    def sample_points(self, k, rng):
        ball = Ball(np.zeros(self.dim), 1.0).sample_points(k, rng)
        scale = self._basis @ np.diag(np.sqrt(self._axes_sq)) @ self._basis.T
        return self.center + ball @ scale.T


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------

def project(p, body: ConvexBody) -> np.ndarray:
    """Euclidean projection of p onto the body.

    Closed form for Ball/Box, secular-equation solve for Ellipsoid, Dykstra
    for HalfspacePolytope.  The result q satisfies the variational inequality
    <p - q, c - q> <= tol for every c in the body.
    """
    return body.project(p)


def distance(p, body: ConvexBody) -> float:
    """``||p - project(p, body)||``; zero iff p is a member (within tolerance)."""
    p = as_point(p)
    return float(np.linalg.norm(p - body.project(p)))


def support(body: ConvexBody, direction) -> float:
    """Support function ``max_{c in body} <c, direction>``."""
    direction = as_point(direction)
    if float(np.linalg.norm(direction)) == 0.0:
        raise ZeroDirection("support direction must be nonzero")
    return body.support(direction)


def sphere_directions(dim: int, n: int) -> np.ndarray:
    """Deterministic low-discrepancy unit directions, prefix-stable in n.

    dim 1 alternates the two signs, dim 2 walks the golden angle, higher
    dimensions push a Halton sequence through the inverse normal CDF and
    normalize.  Prefix stability makes max-over-directions quantities
    monotone nondecreasing in n.
    """
    if n < 1:
        raise ValueError("need n >= 1 directions")
    if dim == 1:
        return np.array([[1.0] if k % 2 == 0 else [-1.0] for k in range(n)])
    if dim == 2:
        golden = (np.sqrt(5.0) - 1.0) / 2.0
        theta = 2.0 * np.pi * ((np.arange(n) * golden) % 1.0)
        return np.column_stack([np.cos(theta), np.sin(theta)])
    primes = [2, 3, 5, 7, 11, 13, 17, 19][:dim]
    u = np.empty((n, dim))
    for j, base in enumerate(primes):
        u[:, j] = _halton_column(n, base)
    z = ndtri(np.clip(u, 1e-12, 1.0 - 1e-12))
    norms = np.linalg.norm(z, axis=1)
    norms[norms == 0.0] = 1.0
    return z / norms[:, None]


def _halton_column(n, base):
    out = np.zeros(n)
    for i in range(n):
        f, r, k = 1.0, 0.0, i + 1
        while k > 0:
            f /= base
            r += f * (k % base)
            k //= base
        out[i] = r
    return out


def hausdorff(body1: ConvexBody, body2: ConvexBody, n_dirs: int) -> float:
    """Hausdorff distance of two convex compacts via support differences.

    Exact in the n_dirs -> infinity limit; monotone nondecreasing in n_dirs
    because the direction sequence is prefix-stable.
    """
    if n_dirs < 16:
        raise ValueError("need n_dirs >= 16")
    if body1.dim != body2.dim:
        raise ValueError("dimension mismatch")
    dirs = sphere_directions(body1.dim, n_dirs)
    best = 0.0
    for v in dirs:
        gap = abs(body1.support(v) - body2.support(v))
        if gap > best:
            best = gap
    return best


def normal_cone_residual(body: ConvexBody, x, xi, tol=MEMBERSHIP_TOL) -> float:
    """``support(body, xi) - <xi, x>``; <= tol certifies xi in the normal cone at x."""
    x = as_point(x)
    xi = as_point(xi)
    if distance(x, body) > tol:
        raise PointOutsideBody("normal cone is empty outside the body")
    if float(np.linalg.norm(xi)) == 0.0:
        return 0.0
    return body.support(xi) - float(xi @ x)


def project_oracle(p, body: ConvexBody, step: float) -> np.ndarray:
    """Brute-force projection: argmin over a membership-filtered grid.

    Independent of project(); used as ground truth in tests.  The grid is
    anchored at integer multiples of step, so the returned distance exceeds
    the true one by at most step*sqrt(d) (grid covering radius).
    """
    p = as_point(p)
    if body.dim > 3:
        raise DimensionTooLarge("grid oracle limited to d <= 3")
    if step <= 0:
        raise ValueError("step must be positive")
    lo, hi = body.bounding_box()
    axes = [
        np.arange(np.floor(lo[i] / step) - 1, np.ceil(hi[i] / step) + 2) * step
        for i in range(body.dim)
    ]
    total = int(np.prod([len(a) for a in axes]))
    if total > 60_000_000:
        raise ValueError("grid too large; use a coarser step")
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    mask = body.contains_mask(pts)
    if not np.any(mask):
        raise ValueError("grid misses the body; use a finer step")
    members = pts[mask]
    dist_sq = np.sum((members - p) ** 2, axis=1)
    return members[int(np.argmin(dist_sq))]


# ---------------------------------------------------------------------------
# counterexample search: projections onto nearby sets can separate by much
# more than the Hausdorff distance between the sets
# ---------------------------------------------------------------------------

@dataclass
class CounterexampleInstance:
    """Probe point u and bodies C, D with ||proj(u,C)-proj(u,D)|| > d_H(C,D)."""

    u: np.ndarray
    c_body: ConvexBody
    d_body: ConvexBody
    lhs: float
    rhs: float


SEGMENT_THICKNESS = 1e-6


def segment_body(a, b, thickness=SEGMENT_THICKNESS) -> HalfspacePolytope:
    """Planar segment [a, b] as a degenerate 4-row halfspace body."""
    a = as_point(a)
    b = as_point(b)
    mid = 0.5 * (a + b)
    axis = b - a
    length = float(np.linalg.norm(axis))
    if length == 0.0:
        raise ValueError("segment endpoints coincide")
    axis = axis / length
    normal = np.array([-axis[1], axis[0]])
    half = 0.5 * length
    rows = [
        (normal, float(normal @ mid) + thickness / 2.0),
        (-normal, float(-normal @ mid) + thickness / 2.0),
        (axis, float(axis @ mid) + half),
        (-axis, float(-axis @ mid) + half),
    ]
    return HalfspacePolytope(rows, float(np.linalg.norm(mid)) + half + 1.0, mid)


def _segment_project(u, a, b):
    axis = b - a
    t = float((u - a) @ axis) / float(axis @ axis)
    return a + min(1.0, max(0.0, t)) * axis


def _segment_hausdorff(a1, b1, a2, b2):
    # distance-to-a-segment is convex along a segment, so the sup sits at an
    # endpoint; exact for segment pairs
    d = 0.0
    for p in (a1, b1):
        d = max(d, float(np.linalg.norm(p - _segment_project(p, a2, b2))))
    for p in (a2, b2):
        d = max(d, float(np.linalg.norm(p - _segment_project(p, a1, b1))))
    return d


def projection_gap_search(seed: int, budget: int) -> CounterexampleInstance:
    """Randomized search for a pair of planar segments violating the naive
    projection-vs-Hausdorff bound by a factor >= 1.1.

    Candidates are screened with exact segment arithmetic; the returned
    instance is re-measured with the official project() and hausdorff()
    operations on the degenerate polytope bodies.
    """
    if budget < 1000:
        raise ValueError("budget must be >= 1000")
    rng = np.random.default_rng(seed)
    for _ in range(budget):
        center = rng.uniform(-0.5, 0.5, size=2)
        angle = rng.uniform(0.0, 2.0 * np.pi)
        half_len = rng.uniform(0.5, 2.0)
        axis = np.array([np.cos(angle), np.sin(angle)])
        a1, b1 = center - half_len * axis, center + half_len * axis

        tilt = rng.uniform(0.02, 0.25) * (1 if rng.random() < 0.5 else -1)
        shift = rng.normal(0.0, 0.02, size=2)
        scale = rng.uniform(0.9, 1.1)
        axis2 = np.array([np.cos(angle + tilt), np.sin(angle + tilt)])
        c2 = center + shift
        a2, b2 = c2 - scale * half_len * axis2, c2 + scale * half_len * axis2

        normal = np.array([-axis[1], axis[0]])
        along = rng.uniform(-0.5, 0.5) * half_len
        height = rng.uniform(1.5, 6.0) * (1 if rng.random() < 0.5 else -1)
        u = center + along * axis + height * normal

        lhs_cheap = float(
            np.linalg.norm(_segment_project(u, a1, b1) - _segment_project(u, a2, b2))
        )
        rhs_cheap = _segment_hausdorff(a1, b1, a2, b2)
        if rhs_cheap < 1e-6 or lhs_cheap < 1.15 * rhs_cheap:
            continue

        c_body = segment_body(a1, b1)
        d_body = segment_body(a2, b2)
        lhs = float(np.linalg.norm(c_body.project(u) - d_body.project(u)))
        rhs = hausdorff(c_body, d_body, 256)
        if rhs > 0.0 and lhs >= 1.1 * rhs:
            return CounterexampleInstance(u=u, c_body=c_body, d_body=d_body, lhs=lhs, rhs=rhs)
    raise NotFound(f"no projection-gap instance found in {budget} trials")
