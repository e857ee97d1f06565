import numpy as np
import pytest

import sweepsim as sw
from sweepsim.errors import NonConvergence, TimeOutOfRange
from sweepsim.presets import disk_scenario, drag_scenario, forced_disk_scenario
from sweepsim.scenario import CONSTANT, LINEAR


# --- drift evaluation ---------------------------------------------------------

def test_fourier_all_zero_coefficients():
    spec = sw.Fourier(np.zeros((0, 2)), np.zeros((0, 2)), 1.0, CONSTANT, dim_hint=2)
    for t in np.linspace(0, 1, 7):
        assert np.allclose(sw.eval_drift(spec, t, 0.3), (0, 0))


def test_piecewise_linear_interpolation():
    spec = sw.PiecewiseLinear([0.0, 1.0], [[0.0, 0.0], [2.0, 0.0]], CONSTANT)
    assert np.allclose(sw.eval_drift(spec, 0.5, 0.0), (1.0, 0.0))


def test_sqrt_cusp_value():
    spec = sw.SqrtCusp((1.0, 0.0), 0.5, CONSTANT)
    assert np.allclose(sw.eval_drift(spec, 0.75, 0.0), (0.5, 0.0))


def test_linear_coupling_vanishes_at_lambda_zero():
    drift = sw.Fourier([[1.0, 0.0]], [[0.0, 2.0]], 1.0, LINEAR)
    con = sw.AffineContraction(0.3 * np.eye(2), (0.5, 0.0), coupling=LINEAR)
    for t in np.linspace(0, 1, 5):
        assert np.linalg.norm(sw.eval_drift(drift, t, 0.0)) == 0.0
    for x in ([0.3, -1.0], [2.0, 2.0]):
        assert np.linalg.norm(sw.eval_contraction(con, x, 0.0)) == 0.0
    assert np.allclose(sw.eval_drift(drift, 0.25, 0.5), 0.5 * drift.base_value(0.25))


def test_piecewise_linear_out_of_range():
    spec = sw.PiecewiseLinear([0.0, 1.0], [[0.0], [1.0]], CONSTANT)
    with pytest.raises(TimeOutOfRange):
        spec.base_value(1.5)


# --- variation bounds ----------------------------------------------------------

def test_variation_bound_zero_drift():
    spec = sw.Fourier(np.zeros((0, 2)), np.zeros((0, 2)), 1.0, CONSTANT, dim_hint=2)
    assert sw.drift_variation_bound(spec, 0.0, 1.0) == 0.0


def test_variation_bound_piecewise_path_length():
    spec = sw.PiecewiseLinear([0.0, 1.0], [[0.0, 0.0], [2.0, 0.0]], CONSTANT)
    assert sw.drift_variation_bound(spec, 0.0, 1.0) == pytest.approx(2.0)
    assert sw.drift_variation_bound(spec, 0.25, 0.75) == pytest.approx(1.0)


def test_variation_bound_sqrt_cusp():
    spec = sw.SqrtCusp((1.0, 0.0), 0.0, CONSTANT)
    assert sw.drift_variation_bound(spec, 0.0, 0.25) == pytest.approx(0.5)
    spec2 = sw.SqrtCusp((1.0, 0.0), 0.5, CONSTANT)
    # across the cusp: down to zero and back up
    assert sw.drift_variation_bound(spec2, 0.25, 0.75) == pytest.approx(1.0)


@pytest.mark.parametrize("spec", [
    sw.Fourier([[0.4, 0.0]], [[0.0, 0.2]], 1.0, CONSTANT),
    sw.PiecewiseLinear([0.0, 0.3, 1.0], [[0.0, 0.0], [1.0, 0.5], [0.0, 0.0]], CONSTANT),
    sw.SqrtCusp((0.7, 0.7), 0.4, CONSTANT),
])
def test_variation_bound_superadditive_consistency(spec):
    for (s, m, t) in [(0.0, 0.3, 1.0), (0.1, 0.5, 0.9), (0.2, 0.4, 0.41)]:
        whole = sw.drift_variation_bound(spec, s, t)
        split = sw.drift_variation_bound(spec, s, m) + sw.drift_variation_bound(spec, m, t)
        assert whole <= split + 1e-12


@pytest.mark.parametrize("spec", [
    sw.Fourier([[0.4, 0.0]], [[0.0, 0.2]], 1.0, CONSTANT),
    sw.PiecewiseLinear([0.0, 1.0], [[0.0, 0.0], [2.0, 0.0]], CONSTANT),
    sw.SqrtCusp((1.0, 0.0), 0.5, CONSTANT),
])
def test_variation_bound_vanishes_for_short_intervals(spec):
    # bisect an interval length delta with bound <= 1e-3 uniformly over starts
    delta = 1.0
    for _ in range(40):
        worst = max(sw.drift_variation_bound(spec, s, min(s + delta, 1.0))
                    for s in np.linspace(0.0, 1.0 - delta, 33))
        if worst <= 1e-3:
            break
        delta /= 2.0
    else:
        pytest.fail("no interval length with variation bound below 1e-3")
    assert delta > 0


# --- contraction fixed point ----------------------------------------------------

def test_fixed_point_zero_contraction():
    assert np.allclose(sw.contraction_fixed_point(sw.ZeroContraction(), 0.0, dim=3), np.zeros(3))


def test_fixed_point_affine_hand_solved():
    spec = sw.AffineContraction(0.5 * np.eye(2), (1.0, 0.0))
    xi = sw.contraction_fixed_point(spec, 0.0, tol=1e-14)
    assert np.allclose(xi, (2.0, 0.0), atol=1e-12)
    assert np.linalg.norm(sw.eval_contraction(spec, xi, 0.0) - xi) <= 1e-12


def test_fixed_point_picard_error_bound():
    # after k steps the Picard error obeys the geometric contraction estimate
    spec = sw.AffineContraction(0.5 * np.eye(2), (1.0, 0.0))
    L2, xi = 0.5, np.array([2.0, 0.0])
    x = np.zeros(2)
    for k in range(1, 20):
        x = sw.eval_contraction(spec, x, 0.0)
        assert np.linalg.norm(x - xi) <= L2**k * np.linalg.norm(xi) / (1 - L2) + 1e-12


def test_force_affine_example():
    force = sw.ForceSpec(np.eye(2), (-2.0, 0.0))
    assert np.allclose(sw.eval_force(force, 0.3, (1.0, 0.0), 0.7), (-1.0, 0.0))


# --- invariant region ------------------------------------------------------------

def test_omega_unit_disk_no_drift():
    scn = disk_scenario()
    omega = sw.omega_region(scn, 0.0)
    assert omega.radius == pytest.approx(1.0 / (1.0 - 1e-6), rel=1e-9)
    assert np.allclose(omega.center, (0, 0))


def test_omega_shifted_ball_hand_value():
    scn = sw.SweepingScenario(
        dimension=2,
        body=sw.Ball((0.0, 0.0), 1.0),
        interior_point=(0.0, 0.0),
        drift=sw.PiecewiseLinear([0.0, 1.0], [[0.5, 0.0], [0.5, 0.0]], CONSTANT),
        contraction=sw.AffineContraction(0.5 * np.eye(2), np.zeros(2), L2=0.5),
        force=sw.ForceSpec(np.zeros((2, 2)), np.zeros(2)),
        period=1.0,
        L1=1.0,
    )
    omega = sw.omega_region(scn, 0.0)
    assert omega.radius == pytest.approx(3.0, rel=1e-9)


def test_omega_radius_nondecreasing_in_l2():
    radii = []
    for l2 in (0.1, 0.3, 0.6):
        scn = sw.SweepingScenario(
            dimension=2,
            body=sw.Ball((0.0, 0.0), 1.0),
            interior_point=(0.0, 0.0),
            drift=sw.Fourier(np.zeros((0, 2)), np.zeros((0, 2)), 1.0, CONSTANT, dim_hint=2),
            contraction=sw.AffineContraction(l2 * np.eye(2), np.zeros(2), L2=l2),
            force=sw.ForceSpec(np.zeros((2, 2)), np.zeros(2)),
            period=1.0,
        )
        radii.append(sw.omega_region(scn, 0.0).radius)
    assert radii[0] < radii[1] < radii[2]


# --- audit -----------------------------------------------------------------------

def test_audit_zero_contraction():
    report = sw.lipschitz_audit(disk_scenario(), n_samples=1000, seed=3)
    assert report.L2_empirical == 0.0
    assert report.passed


def test_audit_measures_affine_operator_norm():
    scn = sw.SweepingScenario(
        dimension=2,
        body=sw.Ball((0.0, 0.0), 1.0),
        interior_point=(0.0, 0.0),
        drift=sw.Fourier(np.zeros((0, 2)), np.zeros((0, 2)), 1.0, CONSTANT, dim_hint=2),
        contraction=sw.AffineContraction(0.3 * np.eye(2), np.zeros(2)),
        force=sw.ForceSpec(np.zeros((2, 2)), np.zeros(2)),
        period=1.0,
    )
    report = sw.lipschitz_audit(scn, n_samples=1500, seed=5)
    assert report.L2_empirical == pytest.approx(0.3, abs=1e-9)
    assert report.passed


def test_audit_deterministic_for_fixed_seed():
    a = sw.lipschitz_audit(forced_disk_scenario(), n_samples=1000, seed=11)
    b = sw.lipschitz_audit(forced_disk_scenario(), n_samples=1000, seed=11)
    assert a == b


def test_audit_fails_when_declared_constant_too_small():
    scn = sw.SweepingScenario(
        dimension=2,
        body=sw.Ball((0.0, 0.0), 1.0),
        interior_point=(0.0, 0.0),
        drift=sw.Fourier(np.zeros((0, 2)), np.zeros((0, 2)), 1.0, CONSTANT, dim_hint=2),
        contraction=sw.AffineContraction(0.3 * np.eye(2), np.zeros(2), L2=0.1),
        force=sw.ForceSpec(np.zeros((2, 2)), np.zeros(2)),
        period=1.0,
    )
    report = sw.lipschitz_audit(scn, n_samples=1000, seed=0)
    assert not report.passed
    assert report.L2_empirical > 0.1


# --- scenario validation -----------------------------------------------------------

def test_scenario_rejects_outside_interior_point():
    with pytest.raises(ValueError):
        sw.SweepingScenario(
            dimension=2,
            body=sw.Ball((0.0, 0.0), 1.0),
            interior_point=(3.0, 0.0),
            drift=sw.Fourier(np.zeros((0, 2)), np.zeros((0, 2)), 1.0, CONSTANT, dim_hint=2),
            contraction=sw.ZeroContraction(),
            force=sw.ForceSpec(np.zeros((2, 2)), np.zeros(2)),
            period=1.0,
        )


def test_scenario_rejects_nonpositive_period():
    with pytest.raises(ValueError):
        drag = drag_scenario()
        sw.SweepingScenario(
            dimension=2, body=drag.body, interior_point=(0, 0), drift=drag.drift,
            contraction=drag.contraction, force=drag.force, period=0.0,
        )


def test_declared_l2_range_enforced():
    with pytest.raises(ValueError):
        sw.AffineContraction(1.5 * np.eye(2), np.zeros(2))
    with pytest.raises(ValueError):
        sw.AffineContraction(0.5 * np.eye(2), np.zeros(2), L2=1.2)


def test_fixed_point_diverges_for_invalid_declared_l2(monkeypatch):
    spec = sw.AffineContraction(0.5 * np.eye(2), (1.0, 0.0))
    monkeypatch.setattr(spec, "matrix", 1.5 * np.eye(2))   # break the invariant
    with pytest.raises(NonConvergence):
        sw.contraction_fixed_point(spec, 0.0, dim=2, max_iter=200)
