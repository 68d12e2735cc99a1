import math

import magflow


def constant_setup(a=1.0):
    metric = magflow.ConformalMetric(magflow.InvariantScalar(0.0, []))
    field = magflow.MagneticField(a, magflow.InvariantOneForm([]))
    return metric, field


def test_group_geometry():
    g = magflow.genus2_group()
    assert g.relator_residual < 1e-8
    assert math.isclose(g.circumradius, math.acosh(3.0 + 2.0 * math.sqrt(2.0)), rel_tol=1e-12)
    assert math.isclose(g.inradius, math.acosh(1.0 + math.sqrt(2.0)), rel_tol=1e-12)
    assert math.isclose(magflow.injectivity_radius(), g.inradius, rel_tol=1e-12)


def test_helicity_on_the_constant_metric():
    metric, field = constant_setup()
    assert math.isclose(metric.area(), 4.0 * math.pi, rel_tol=1e-9)
    assert abs(magflow.helicity_formula(metric, field)) < 1e-12
    assert abs(magflow.helicity_integral(metric, field)) < 1e-6
    assert math.isclose(magflow.s_h_value(metric, field), 1.0, rel_tol=1e-12)
    exact = magflow.MagneticField(0.0, magflow.InvariantOneForm([]))
    assert magflow.s_h_value(metric, exact) is None


def test_bump_fields_round_trip():
    bump = magflow.RadialBump(magflow.Point(0.0, 1.0), 0.25, 1.2)
    u = magflow.InvariantScalar(0.0, [bump])
    center = magflow.polar_point(magflow.Point(0.0, 1.0), 0.3, 0.4)
    assert u.value(center) > 0.0
    metric = magflow.ConformalMetric(u)
    assert metric.conformal_factor(center) == math.exp(u.value(center))


def test_circle_orbit_period():
    metric, field = constant_setup()
    oracle = magflow.circle_orbit_oracle(2.0)
    traj = magflow.integrate(metric, field, 2.0, magflow.PhaseState(0.0, 1.0, 0.0), 8.0, 1e-3)
    period = magflow.detect_period(traj, 5e-3)
    assert period is not None
    assert abs(period - oracle.period) < 1e-5
    assert traj.max_step_error < 1e-8


def test_kernel_closed_form_and_mean_value():
    r = 2.0
    assert math.isclose(magflow.q_kernel_imag(r, 0.5), magflow.disk_area(r), rel_tol=1e-9)
    assert magflow.q_kernel_imag(1.0, 0.0) == magflow.q_kernel_real(1.0, 0.0)
    chk = magflow.eigenfunction_mean_value_check(1.5, magflow.Point(0.0, 1.0), 1.0)
    assert chk.residual < 1e-6


def test_radon_transform_agrees_between_methods():
    bump = magflow.RadialBump(magflow.Point(0.0, 1.0), 0.3, 1.3)
    raw = magflow.InvariantScalar(0.0, [bump])
    h = magflow.InvariantScalar(-raw.integral() / (4.0 * math.pi), [bump])
    x = magflow.Point(0.2, 0.9)
    direct = magflow.disk_radon(h, x, 1.0, order=96)
    sites = magflow.disk_radon_sites(h, x, 1.0)
    assert abs(direct - sites) < 1e-7


def test_critical_value_bounds():
    metric, field = constant_setup()
    report = magflow.theorem_gap_report(metric, field)
    assert report.estimate.lower <= report.estimate.upper
    assert math.isclose(report.estimate.upper, 0.5, rel_tol=1e-9)
    assert report.s_c.bounded
    # Constant data is the equality case s_c == s_h: the finite-radius gap
    # approaches zero from below, inside the theorem guard.
    assert abs(report.gap) <= 1e-3
    assert abs(report.gk_residual) <= 1e-9
    assert report.u_constant and report.beta_trivial
    assert math.isclose(report.s_h, 1.0, rel_tol=1e-12)
