"""Problem data: the moving constraint ``A + a(t, lam) + c(x, lam)``, the
perturbation ``f(t, x, lam)``, declared Lipschitz/variation constants, and
the derived objects (contraction fixed point, invariant region).

Signal catalogs are deliberately small so the declared constants can be
guaranteed by construction: drifts are Fourier sums, piecewise-linear paths,
or square-root cusps; contractions are zero, affine, or radial-tanh maps;
forces are affine plus bounded-slope tanh terms plus a Fourier forcing.

The homotopy parameter ``lam`` enters through a per-signal coupling: with
``LINEAR`` coupling the signal is multiplied by lam, so lam = 0 removes the
drift/contraction/forcing and leaves the constant-set autonomous process.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import geometry
from .errors import NonConvergence, TimeOutOfRange
from .geometry import ConvexBody, as_point

CONSTANT = "constant"
LINEAR = "linear"
_COUPLINGS = (CONSTANT, LINEAR)


def _coupling_factor(coupling: str, lam: float) -> float:
    if coupling == CONSTANT:
        return 1.0
    if coupling == LINEAR:
        return float(lam)
    raise ValueError(f"unknown coupling {coupling!r}")


# ---------------------------------------------------------------------------
# drift catalog
# ---------------------------------------------------------------------------

@dataclass
class Fourier:
    """Sum over harmonics k>=1 of cos_coeffs[k-1]*cos(2 pi k t / period) and
    sin_coeffs[k-1]*sin(2 pi k t / period).  Empty coefficient lists give the
    zero signal (pass dim_hint so the output dimension is known)."""

    cos_coeffs: np.ndarray        # (K, d)
    sin_coeffs: np.ndarray        # (K, d)
    period: float
    coupling: str = CONSTANT
    dim_hint: int = 0

    def __post_init__(self):
        self.cos_coeffs = self._coerce(self.cos_coeffs)
        self.sin_coeffs = self._coerce(self.sin_coeffs)
        self.period = float(self.period)
        if self.period <= 0:
            raise ValueError("period must be positive")
        if self.coupling not in _COUPLINGS:
            raise ValueError(f"unknown coupling {self.coupling!r}")
        if self.cos_coeffs.size and self.sin_coeffs.size:
            if self.cos_coeffs.shape[1] != self.sin_coeffs.shape[1]:
                raise ValueError("cos/sin coefficient dimension mismatch")

    def _coerce(self, coeffs):
        arr = np.asarray(coeffs, dtype=float)
        if arr.size == 0:
            return arr.reshape(0, max(self.dim_hint, 1))
        return np.atleast_2d(arr)

    @property
    def dim(self):
        if self.cos_coeffs.size:
            return self.cos_coeffs.shape[1]
        if self.sin_coeffs.size:
            return self.sin_coeffs.shape[1]
        return self.dim_hint

    def base_value(self, t: float) -> np.ndarray:
        out = np.zeros(max(self.dim, 1))
        w = 2.0 * np.pi / self.period
        for k in range(self.cos_coeffs.shape[0]):
            out += self.cos_coeffs[k] * np.cos(w * (k + 1) * t)
        for k in range(self.sin_coeffs.shape[0]):
            out += self.sin_coeffs[k] * np.sin(w * (k + 1) * t)
        return out

    def base_variation(self, s: float, t: float) -> float:
        # arc bound: var <= integral of ||a'|| <= sum_k ||coeff_k|| * w_k * (t-s)
        w = 2.0 * np.pi / self.period
        rate = 0.0
        for k in range(self.cos_coeffs.shape[0]):
            rate += float(np.linalg.norm(self.cos_coeffs[k])) * w * (k + 1)
        for k in range(self.sin_coeffs.shape[0]):
            rate += float(np.linalg.norm(self.sin_coeffs[k])) * w * (k + 1)
        return rate * (t - s)


@dataclass
class PiecewiseLinear:
    """Linear interpolation through (times[i], values[i]); exact variation."""

    times: np.ndarray
    values: np.ndarray            # (len(times), d)
    coupling: str = CONSTANT

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float).ravel()
        self.values = np.atleast_2d(np.asarray(self.values, dtype=float))
        if self.times.size < 2:
            raise ValueError("need at least two knots")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")
        if self.values.shape[0] != self.times.size:
            raise ValueError("one value per knot required")
        if self.coupling not in _COUPLINGS:
            raise ValueError(f"unknown coupling {self.coupling!r}")

    @property
    def dim(self):
        return self.values.shape[1]

    def base_value(self, t: float) -> np.ndarray:
        if t < self.times[0] - 1e-12 or t > self.times[-1] + 1e-12:
            raise TimeOutOfRange(f"t={t} outside knot range [{self.times[0]}, {self.times[-1]}]")
        t = min(max(t, self.times[0]), self.times[-1])
        idx = int(np.searchsorted(self.times, t, side="right")) - 1
        idx = min(idx, self.times.size - 2)
        t0, t1 = self.times[idx], self.times[idx + 1]
        frac = (t - t0) / (t1 - t0)
        return self.values[idx] + frac * (self.values[idx + 1] - self.values[idx])

    def base_variation(self, s: float, t: float) -> float:
        total = 0.0
        for i in range(self.times.size - 1):
            lo = max(s, self.times[i])
            hi = min(t, self.times[i + 1])
            if hi <= lo:
                continue
            seg = float(np.linalg.norm(self.values[i + 1] - self.values[i]))
            total += seg * (hi - lo) / (self.times[i + 1] - self.times[i])
        return total


@dataclass
class SqrtCusp:
    """``a(t) = sqrt(|t - cusp_time|) * direction``: BV-continuous but not
    Lipschitz at the cusp."""

    direction: np.ndarray
    cusp_time: float
    coupling: str = CONSTANT

    def __post_init__(self):
        self.direction = as_point(self.direction)
        self.cusp_time = float(self.cusp_time)
        if self.coupling not in _COUPLINGS:
            raise ValueError(f"unknown coupling {self.coupling!r}")

    @property
    def dim(self):
        return self.direction.size

    def base_value(self, t: float) -> np.ndarray:
        return np.sqrt(abs(t - self.cusp_time)) * self.direction

    def base_variation(self, s: float, t: float) -> float:
        scale = float(np.linalg.norm(self.direction))
        ts = np.sqrt(abs(s - self.cusp_time))
        tt = np.sqrt(abs(t - self.cusp_time))
        if s <= self.cusp_time <= t:
            return scale * (ts + tt)   # down to the cusp, then back up
        return scale * abs(tt - ts)


DriftSpec = Fourier | PiecewiseLinear | SqrtCusp


def eval_drift(spec: DriftSpec, t: float, lam: float) -> np.ndarray:
    """Moving-set translation a(t, lam)."""
    return _coupling_factor(spec.coupling, lam) * spec.base_value(t)


def drift_variation_bound(spec: DriftSpec, s: float, t: float) -> float:
    """Upper bound on var(a(., lam), [s, t]) uniform over lam in [0, 1]."""
    if t < s:
        raise TimeOutOfRange("need s <= t")
    return spec.base_variation(s, t)   # LINEAR coupling scales by lam <= 1


# ---------------------------------------------------------------------------
# contraction catalog
# ---------------------------------------------------------------------------

@dataclass
class ZeroContraction:
    L2: float = 1e-6   # convention: an arbitrarily small declared constant
    coupling: str = CONSTANT

    def base_value(self, x: np.ndarray) -> np.ndarray:
        return np.zeros_like(x)


@dataclass
class AffineContraction:
    matrix: np.ndarray
    offset: np.ndarray
    L2: float = 0.0    # 0.0 sentinel: filled with the operator norm
    coupling: str = CONSTANT

    def __post_init__(self):
        self.matrix = np.atleast_2d(np.asarray(self.matrix, dtype=float))
        self.offset = as_point(self.offset)
        if self.L2 == 0.0:
            self.L2 = float(np.linalg.norm(self.matrix, 2)) + 1e-12
        if not 0.0 < self.L2 < 1.0:
            raise ValueError("declared L2 must lie in (0, 1)")

    def base_value(self, x: np.ndarray) -> np.ndarray:
        return self.matrix @ x + self.offset


@dataclass
class TanhRadialContraction:
    """``c(x) = gain * tanh(||x - center||) * unit(x - center)``; gain sets
    the Lipschitz scale."""

    gain: float
    center: np.ndarray
    L2: float = 0.0
    coupling: str = CONSTANT

    def __post_init__(self):
        self.gain = float(self.gain)
        self.center = as_point(self.center)
        if self.L2 == 0.0:
            self.L2 = abs(self.gain) + 1e-12
        if not 0.0 < self.L2 < 1.0:
            raise ValueError("declared L2 must lie in (0, 1)")

    def base_value(self, x: np.ndarray) -> np.ndarray:
        v = x - self.center
        r = float(np.linalg.norm(v))
        if r == 0.0:
            return np.zeros_like(x)
        return self.gain * np.tanh(r) / r * v


ContractionSpec = ZeroContraction | AffineContraction | TanhRadialContraction


def eval_contraction(spec: ContractionSpec, x, lam: float) -> np.ndarray:
    return _coupling_factor(spec.coupling, lam) * spec.base_value(as_point(x))


def contraction_fixed_point(spec: ContractionSpec, lam: float, tol: float = 1e-12,
                            dim: int | None = None, max_iter: int = 100_000) -> np.ndarray:
    """Unique solution of c(xi, lam) = xi by Picard iteration from 0."""
    if dim is None:
        if isinstance(spec, AffineContraction):
            dim = spec.offset.size
        elif isinstance(spec, TanhRadialContraction):
            dim = spec.center.size
        else:
            raise ValueError("dim required for a zero contraction")
    xi = np.zeros(dim)
    for _ in range(max_iter):
        nxt = eval_contraction(spec, xi, lam)
        if float(np.linalg.norm(nxt - xi)) <= tol:
            return nxt
        xi = nxt
    raise NonConvergence("contraction fixed point did not converge; declared L2 likely invalid")


# ---------------------------------------------------------------------------
# force catalog
# ---------------------------------------------------------------------------

@dataclass
class TanhTerm:
    gain: float
    direction: np.ndarray
    center: np.ndarray

    def __post_init__(self):
        self.gain = float(self.gain)
        self.direction = as_point(self.direction)
        self.center = as_point(self.center)

    def value(self, x: np.ndarray) -> np.ndarray:
        return self.gain * np.tanh(float(self.direction @ (x - self.center))) * self.direction


@dataclass
class ForceSpec:
    """``f(t, x, lam) = linear_part x + offset + sum tanh_terms + forcing(t, lam)``.

    Globally Lipschitz in x by construction; Lf declares the constant."""

    linear_part: np.ndarray
    offset: np.ndarray
    tanh_terms: list[TanhTerm] = field(default_factory=list)
    forcing: Fourier | None = None
    Lf: float = 0.0    # 0.0 sentinel: filled from the catalog bound

    def __post_init__(self):
        self.linear_part = np.atleast_2d(np.asarray(self.linear_part, dtype=float))
        self.offset = as_point(self.offset)
        if self.Lf == 0.0:
            self.Lf = float(np.linalg.norm(self.linear_part, 2))
            for term in self.tanh_terms:
                self.Lf += abs(term.gain) * float(term.direction @ term.direction)
            self.Lf += 1e-12
        if self.Lf < 0:
            raise ValueError("Lf must be >= 0")

    @property
    def dim(self):
        return self.offset.size


def eval_force(spec: ForceSpec, t: float, x, lam: float) -> np.ndarray:
    x = as_point(x)
    out = spec.linear_part @ x + spec.offset
    for term in spec.tanh_terms:
        out = out + term.value(x)
    if spec.forcing is not None:
        out = out + eval_drift(spec.forcing, t, lam)
    return out


# ---------------------------------------------------------------------------
# the full datum
# ---------------------------------------------------------------------------

@dataclass
class SweepingScenario:
    dimension: int
    body: ConvexBody
    interior_point: np.ndarray    # b0, a certified member of the body
    drift: DriftSpec
    contraction: ContractionSpec
    force: ForceSpec
    period: float
    L1: float = 0.0               # time-Lipschitz constant of the implicit term

    def __post_init__(self):
        self.interior_point = as_point(self.interior_point)
        self.period = float(self.period)
        self.L1 = float(self.L1)
        if self.period <= 0:
            raise ValueError("period must be positive")
        if self.L1 < 0:
            raise ValueError("L1 must be >= 0")
        if self.body.dim != self.dimension:
            raise ValueError("body dimension mismatch")
        if self.interior_point.size != self.dimension:
            raise ValueError("interior_point dimension mismatch")
        if geometry.distance(self.interior_point, self.body) > 1e-10:
            raise ValueError("interior_point must belong to the body")
        if not 1 <= self.dimension <= 8:
            raise ValueError("dimension must lie in 1..8")
        if not 0.0 < self.L2 < 1.0:
            raise ValueError("declared L2 must lie in (0, 1)")
        drift_dim = self.drift.dim
        if drift_dim not in (0, self.dimension):
            raise ValueError("drift dimension mismatch")
        if self.force.dim != self.dimension:
            raise ValueError("force dimension mismatch")
        if isinstance(self.drift, PiecewiseLinear):
            if self.drift.times[0] > 1e-12 or self.drift.times[-1] < self.period - 1e-12:
                raise ValueError("piecewise-linear drift must cover [0, period]")

    @property
    def L2(self) -> float:
        return self.contraction.L2

    # convenience wrappers that enforce the [0, T] time range
    def drift_at(self, t: float, lam: float) -> np.ndarray:
        if t < -1e-12 or t > self.period + 1e-12:
            raise TimeOutOfRange(f"t={t} outside [0, {self.period}]")
        return eval_drift(self.drift, t, lam)

    def contraction_at(self, x, lam: float) -> np.ndarray:
        return eval_contraction(self.contraction, x, lam)

    def force_at(self, t: float, x, lam: float) -> np.ndarray:
        return eval_force(self.force, t, x, lam)

    def fixed_point(self, lam: float, tol: float = 1e-12) -> np.ndarray:
        return contraction_fixed_point(self.contraction, lam, tol, dim=self.dimension)


@dataclass
class AuditReport:
    L2_empirical: float
    Lf_empirical: float
    var_a_empirical: float
    samples_used: int
    passed: bool


def omega_region(scn: SweepingScenario, lam: float, n_grid: int = 256,
                 n_dirs: int = 256) -> geometry.Ball:
    """Invariant ball: center at the contraction fixed point, radius the
    time-sup of sup-norms over the translated body divided by (1 - L2).

    The sup over t uses a uniform grid refined by the drift variation bound
    between grid points, so the returned radius is an upper bound.
    """
    xi = scn.fixed_point(lam)
    ts = np.linspace(0.0, scn.period, max(n_grid, 256))

    if isinstance(scn.body, geometry.Ball):
        def sup_norm(t):
            a = scn.drift_at(t, lam)
            return float(np.linalg.norm(scn.body.center + a)) + scn.body.radius
    else:
        dirs = geometry.sphere_directions(scn.dimension, n_dirs)
        base_supports = np.array([scn.body.support(v) for v in dirs])

        def sup_norm(t):
            a = scn.drift_at(t, lam)
            return float(np.max(base_supports + dirs @ a))

    values = np.array([sup_norm(t) for t in ts])
    best = 0.0
    for i in range(len(ts) - 1):
        slack = drift_variation_bound(scn.drift, ts[i], ts[i + 1])
        best = max(best, max(values[i], values[i + 1]) + slack)
    best = max(best, values[-1])
    return geometry.Ball(xi, best / (1.0 - scn.L2))


def lipschitz_audit(scn: SweepingScenario, n_samples: int = 2000,
                    seed: int = 0) -> AuditReport:
    """Empirical difference-quotient estimates of L2 and Lf, plus a measured
    drift variation; pass iff the empirical constants stay below declared."""
    if n_samples < 1000:
        raise ValueError("need n_samples >= 1000")
    rng = np.random.default_rng(seed)
    omega = omega_region(scn, 0.0)
    radius = 2.0 * max(omega.radius, 1.0)
    center = omega.center

    d = scn.dimension
    l2_emp = 0.0
    lf_emp = 0.0
    for _ in range(n_samples):
        x = center + radius * rng.uniform(-1.0, 1.0, size=d)
        y = center + radius * rng.uniform(-1.0, 1.0, size=d)
        gap = float(np.linalg.norm(x - y))
        if gap < 1e-9:
            continue
        lam = rng.random()
        t = rng.uniform(0.0, scn.period)
        dc = float(np.linalg.norm(scn.contraction_at(x, lam) - scn.contraction_at(y, lam)))
        df = float(np.linalg.norm(scn.force_at(t, x, lam) - scn.force_at(t, y, lam)))
        l2_emp = max(l2_emp, dc / gap)
        lf_emp = max(lf_emp, df / gap)

    ts = np.linspace(0.0, scn.period, 2048)
    var = 0.0
    prev = eval_drift(scn.drift, ts[0], 1.0)
    for t in ts[1:]:
        cur = eval_drift(scn.drift, t, 1.0)
        var += float(np.linalg.norm(cur - prev))
        prev = cur

    passed = (l2_emp <= scn.L2 + 1e-9) and (lf_emp <= scn.force.Lf + 1e-9)
    return AuditReport(
        L2_empirical=l2_emp,
        Lf_empirical=lf_emp,
        var_a_empirical=var,
        samples_used=n_samples,
        passed=passed,
    )
