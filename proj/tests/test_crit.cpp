#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "magflow/crit.hpp"

using namespace magflow;

namespace {

constexpr double kPi = 3.14159265358979323846;

const SurfaceGroup& group() {
  static SurfaceGroup g = build_genus2_group();
  return g;
}

ConformalMetric flat_metric() {
  return ConformalMetric(group(), InvariantScalar(group(), 0.0, {}));
}

MagneticField constant_field(double a) {
  return MagneticField(a, InvariantOneForm(group(), {}));
}

}  // namespace

TEST_CASE("action on base circles: closed forms and speed optimization") {
  const ConformalMetric g = flat_metric();
  const MagneticField sigma = constant_field(1.0);

  SUBCASE("unit-speed circle, k = 1/2") {
    for (double r : {1.0, 2.0}) {
      const CurveSample c = circle_curve(g, GeodesicCircle{group().base, r}, 1.0, 16384);
      const double expected = 2.0 * kPi * (1.0 - std::exp(-r));
      CHECK(action_value(g, sigma, c, 0.5) == doctest::Approx(expected).epsilon(0.0).scale(1.0).epsilon(2e-6));
    }
  }

  SUBCASE("kinetic term only") {
    const CurveSample c = circle_curve(g, GeodesicCircle{group().base, 1.0}, 1.0, 16384);
    CHECK(action_value(g, constant_field(0.0), c, 0.0) ==
          doctest::Approx(kPi * std::sinh(1.0)).epsilon(1e-7));
  }

  SUBCASE("constant speed sqrt(2k) minimizes the action") {
    const GeodesicCircle circle{group().base, 1.0};
    const double k = 0.5;
    const double at_one = action_value(g, sigma, circle_curve(g, circle, 1.0, 8192), k);
    const double slow = action_value(g, sigma, circle_curve(g, circle, 0.8, 8192), k);
    const double fast = action_value(g, sigma, circle_curve(g, circle, 1.25, 8192), k);
    CHECK(at_one < slow);
    CHECK(at_one < fast);
    const double stokes = std::sqrt(2.0 * k) * circle_g_length(g, circle) - circle_flux(sigma, circle);
    CHECK(at_one == doctest::Approx(stokes).epsilon(0.0).scale(1.0).epsilon(2e-6));
  }

  SUBCASE("validation") {
    CurveSample open;
    open.node = {Point{0.0, 1.0}, Point{0.3, 1.0}, Point{0.3, 1.4}};
    open.time = {0.0, 1.0, 2.0};
    CHECK_THROWS_AS(action_value(g, sigma, open, 0.0), std::invalid_argument);

    CurveSample stalled;
    stalled.node = {Point{0.0, 1.0}, Point{0.3, 1.0}, Point{0.0, 1.0}};
    stalled.time = {0.0, 1.0, 1.0};
    CHECK_THROWS_AS(action_value(g, sigma, stalled, 0.0), std::invalid_argument);

    CHECK_THROWS_AS(circle_curve(g, GeodesicCircle{group().base, 1.0}, 0.0, 64),
                    std::invalid_argument);
    CHECK_THROWS_AS(circle_curve(g, GeodesicCircle{group().base, 1.0}, 1.0, 4),
                    std::invalid_argument);
  }
}

TEST_CASE("action-Stokes consistency on a bumpy metric") {
  const ConformalMetric g(group(),
                          InvariantScalar(group(), 0.0, {RadialBump{group().base, 0.15, 1.2}}));
  const MagneticField sigma(1.0, InvariantOneForm(group(), {RadialBump{group().base, 0.25, 1.0}}));
  const GeodesicCircle circle{polar_point(group().base, 0.7, 0.4), 1.0};
  const double k = 0.5;
  const CurveSample c = circle_curve(g, circle, std::sqrt(2.0 * k), 16384);
  const double stokes = std::sqrt(2.0 * k) * circle_g_length(g, circle) - circle_flux(sigma, circle);
  CHECK(action_value(g, sigma, c, k) == doctest::Approx(stokes).epsilon(0.0).scale(1.0).epsilon(1e-5));

  // Sanity on the sampled parametrization itself.
  REQUIRE(c.node.size() == c.time.size());
  CHECK(c.node.front().x == c.node.back().x);
  CHECK(c.node.front().y == c.node.back().y);
  for (std::size_t i = 0; i + 1 < c.time.size(); ++i) CHECK(c.time[i] < c.time[i + 1]);
}

TEST_CASE("circle length and flux building blocks") {
  SUBCASE("constant factors are closed-form") {
    CHECK(circle_g_length(flat_metric(), GeodesicCircle{group().base, 2.0}) ==
          doctest::Approx(2.0 * kPi * std::sinh(2.0)).epsilon(1e-14));
    const ConformalMetric half(group(), InvariantScalar(group(), std::log(2.0), {}));
    CHECK(circle_g_length(half, GeodesicCircle{group().base, 1.0}) ==
          doctest::Approx(4.0 * kPi * std::sinh(1.0)).epsilon(1e-14));
  }

  SUBCASE("circle inside a bump support: u constant along the circle") {
    const double amp = 0.2, sup = 1.3, c0 = 0.3;
    const ConformalMetric g(group(),
                            InvariantScalar(group(), c0, {RadialBump{group().base, amp, sup}}));
    const double r = 0.5;
    const double m = std::cosh(r) - 1.0;
    const double z = 1.0 - m / (std::cosh(sup) - 1.0);
    const double expected = std::exp(c0 + amp * z * z * z * z) * 2.0 * kPi * std::sinh(r);
    CHECK(circle_g_length(g, GeodesicCircle{group().base, r}) ==
          doctest::Approx(expected).epsilon(1e-12));
  }

  SUBCASE("edge-crossing circle: spacing refinement is converged") {
    const ConformalMetric g(group(),
                            InvariantScalar(group(), 0.0, {RadialBump{group().base, 0.2, 1.3}}));
    const GeodesicCircle circle{polar_point(group().base, 0.7, 0.4), 1.5};
    const double len = 2.0 * kPi * std::sinh(1.5);
    const int n = 1 << 13;
    const double dt = len / n;
    double ref = 0.0;
    for (int i = 0; i < n; ++i) {
      ref += std::exp(g.u().value(circle_point(circle, (i + 0.5) * dt)));
    }
    ref *= dt;
    CHECK(circle_g_length(g, circle) == doctest::Approx(ref).epsilon(1e-8));
  }

  SUBCASE("one-form loop integrals around a bump center are exact holonomies") {
    const double amp = 0.3, sup = 1.0;
    const MagneticField sigma(0.7, InvariantOneForm(group(), {RadialBump{group().base, amp, sup}}));
    const double r = 0.45;
    const double m = std::cosh(r) - 1.0;
    const double z = 1.0 - m / (std::cosh(sup) - 1.0);
    const double holonomy = 2.0 * kPi * amp * m * z * z * z * z;
    const GeodesicCircle inside{group().base, r};
    CHECK(circle_loop_integral(sigma.beta0(), inside) ==
          doctest::Approx(holonomy).epsilon(1e-12));
    CHECK(circle_flux(sigma, inside) ==
          doctest::Approx(0.7 * disk_area(r) + holonomy).epsilon(1e-12));

    // Past the support the bump carries zero net flux.
    const GeodesicCircle outside{group().base, 1.2};
    CHECK(circle_loop_integral(sigma.beta0(), outside) ==
          doctest::Approx(0.0).epsilon(1e-11).scale(1.0));
  }
}

TEST_CASE("circle lower bound") {
  const ConformalMetric g = flat_metric();
  const MagneticField sigma = constant_field(1.0);

  SUBCASE("constant case saturates to 1/2 via tanh(r/2)") {
    const double at6 = circle_lower_bound(g, sigma, {6.0}, {group().base});
    const double t3 = std::tanh(3.0);
    CHECK(at6 == doctest::Approx(0.5 * t3 * t3).epsilon(1e-12));
    CHECK(at6 >= 0.495);

    const CritBudget budget;
    const double best = circle_lower_bound(g, sigma, budget.r_grid, default_center_grid(group()));
    const double t4 = std::tanh(4.0);
    CHECK(best == doctest::Approx(0.5 * t4 * t4).epsilon(1e-12));
  }

  SUBCASE("orientation coverage and homogeneity") {
    CHECK(circle_lower_bound(g, constant_field(-1.0), {2.0, 4.0}, {group().base}) ==
          doctest::Approx(circle_lower_bound(g, sigma, {2.0, 4.0}, {group().base}))
              .epsilon(1e-15));
    CHECK(circle_lower_bound(g, constant_field(0.0), {2.0}, {group().base}) == 0.0);
    const double base = circle_lower_bound(g, sigma, {3.0}, {group().base});
    CHECK(circle_lower_bound(g, constant_field(0.6), {3.0}, {group().base}) ==
          doctest::Approx(0.36 * base).epsilon(1e-13));
  }

  SUBCASE("monotone in the grids") {
    const std::vector<Point> centers = default_center_grid(group());
    const double small = circle_lower_bound(g, sigma, {1.0, 2.0}, {group().base});
    const double more_r = circle_lower_bound(g, sigma, {1.0, 2.0, 4.0, 8.0}, {group().base});
    const double more_c = circle_lower_bound(g, sigma, {1.0, 2.0, 4.0, 8.0}, centers);
    CHECK(small <= more_r);
    CHECK(more_r <= more_c);
  }

  SUBCASE("exact one-form field gives a small positive bound off center") {
    const MagneticField pure(0.0, InvariantOneForm(group(), {RadialBump{group().base, 0.4, 1.0}}));
    const double b = circle_lower_bound(g, pure, {0.5, 1.0}, {polar_point(group().base, 1.0, 0.8)});
    CHECK(b > 1e-8);
    CHECK(b < 0.01);
  }

  CHECK_THROWS_AS(circle_lower_bound(g, sigma, {}, {group().base}), std::invalid_argument);
  CHECK_THROWS_AS(circle_lower_bound(g, sigma, {1.0}, {}), std::invalid_argument);
}

TEST_CASE("primitive upper bound") {
  const ConformalMetric g = flat_metric();

  SUBCASE("constant case: the bare primitive has norm one everywhere") {
    CHECK(primitive_upper_bound(g, constant_field(1.0)) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(primitive_upper_bound(g, constant_field(0.5)) == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(primitive_upper_bound(g, constant_field(0.0)) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  }

  SUBCASE("homogeneity with the bare family") {
    PrimitiveFamily bare;
    bare.amplitude = {0.0};
    CHECK(primitive_upper_bound(g, constant_field(0.7), bare) ==
          doctest::Approx(0.5 * 0.49).epsilon(1e-12));
  }

  SUBCASE("positive bump keeps the sup on the flat region") {
    const ConformalMetric bumpy(group(),
                                InvariantScalar(group(), 0.0, {RadialBump{group().base, 0.2, 1.3}}));
    CHECK(primitive_upper_bound(bumpy, constant_field(1.0)) ==
          doctest::Approx(0.5).epsilon(1e-9));
  }

  SUBCASE("negative bump moves the sup to the bump center") {
    const ConformalMetric bumpy(group(), InvariantScalar(group(), 0.0,
                                                         {RadialBump{group().base, -0.2, 1.3}}));
    const double up = primitive_upper_bound(bumpy, constant_field(1.0));
    CHECK(up <= 0.5 * std::exp(0.4) + 1e-12);
    CHECK(up >= 0.5 * std::exp(0.4) * (1.0 - 2e-3));
  }

  SUBCASE("validation") {
    PrimitiveFamily bad;
    bad.amplitude = {};
    CHECK_THROWS_AS(primitive_upper_bound(g, constant_field(1.0), bad), std::invalid_argument);
    PrimitiveFamily tiny;
    tiny.samples = 4;
    CHECK_THROWS_AS(primitive_upper_bound(g, constant_field(1.0), tiny), std::invalid_argument);
  }
}

TEST_CASE("critical value estimate and s_c interval") {
  const ConformalMetric g = flat_metric();

  SUBCASE("constant case lands on c = 1/2") {
    const CriticalEstimate est = estimate_critical_value(g, constant_field(1.0));
    const double t4 = std::tanh(4.0);
    CHECK(est.lower == doctest::Approx(0.5 * t4 * t4).epsilon(1e-12));
    CHECK(est.upper == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(est.best_circle.radius == 8.0);
    CHECK(est.best_amplitude == 0.0);
    CHECK(est.best_shape == -1);
    CHECK(est.sample_count == 4096 * 17);

    const ScInterval sc = s_c_value(est);
    CHECK(sc.bounded);
    CHECK(sc.lo >= 1.0 - 1e-9);
    CHECK(sc.lo <= 1.0 + 1e-9);
    CHECK(sc.hi <= 1.006);
  }

  SUBCASE("zero field collapses to [0, 0] with an unbounded intensity") {
    const CriticalEstimate est = estimate_critical_value(g, constant_field(0.0));
    CHECK(est.lower == 0.0);
    CHECK(est.upper == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    const ScInterval sc = s_c_value(est);
    CHECK_FALSE(sc.bounded);
    CHECK(std::isinf(sc.hi));
  }

  SUBCASE("field scaling moves both bounds quadratically") {
    CritBudget bare;
    bare.family.amplitude = {0.0};
    const CriticalEstimate one = estimate_critical_value(g, constant_field(1.0), bare);
    const CriticalEstimate scaled = estimate_critical_value(g, constant_field(0.6), bare);
    CHECK(scaled.lower == doctest::Approx(0.36 * one.lower).epsilon(1e-12));
    CHECK(scaled.upper == doctest::Approx(0.36 * one.upper).epsilon(1e-12));
  }

  SUBCASE("interval arithmetic") {
    CriticalEstimate est;
    est.lower = 0.495;
    est.upper = 0.5;
    const ScInterval sc = s_c_value(est);
    CHECK(sc.lo == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sc.hi == doctest::Approx(1.0 / std::sqrt(0.99)).epsilon(1e-12));
    est.lower = est.upper = 2.0;
    const ScInterval half = s_c_value(est);
    CHECK(half.lo == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(half.hi == doctest::Approx(0.5).epsilon(1e-15));
  }
}

TEST_CASE("theorem gap report") {
  const ConformalMetric g = flat_metric();

  SUBCASE("constant case: equality within the interval width") {
    const TheoremGapReport rep = theorem_gap_report(g, constant_field(1.0));
    CHECK(rep.s_h == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rep.rho_g == 1.0);
    CHECK(rep.gk_rhs == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(std::fabs(rep.gk_residual) < 1e-10);
    CHECK(rep.s_c.hi <= rep.s_h + 1e-3);
    CHECK(rep.u_constant);
    CHECK(rep.beta_trivial);
  }

  SUBCASE("bumpy conformal factor forces a strict gap") {
    const ConformalMetric bumpy(group(),
                                InvariantScalar(group(), 0.0, {RadialBump{group().base, 0.2, 1.3}}));
    const TheoremGapReport rep = theorem_gap_report(bumpy, constant_field(1.0));
    CHECK_FALSE(rep.u_constant);
    CHECK(rep.rho_g < 1.0);
    CHECK(rep.gap > 1e-4);
    CHECK(rep.gk_residual > 1e-3);
  }

  SUBCASE("exact part of the field keeps s_c below s_h") {
    const MagneticField mixed(1.0,
                              InvariantOneForm(group(), {RadialBump{group().base, 0.15, 1.0}}));
    const TheoremGapReport rep = theorem_gap_report(g, mixed);
    CHECK_FALSE(rep.beta_trivial);
    CHECK(rep.s_h == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rep.s_c.hi <= 1.0 + 1e-3);
  }

  SUBCASE("preconditions and violations") {
    CHECK_THROWS_AS(theorem_gap_report(g, constant_field(0.0)), std::invalid_argument);
    CritBudget starved;
    starved.r_grid = {1.0};
    CHECK_THROWS_AS(theorem_gap_report(g, constant_field(1.0), starved), std::runtime_error);
  }
}

TEST_CASE("proposition chain") {
  const ConformalMetric g = flat_metric();

  SUBCASE("constant curvature, a = 1: all ones") {
    const PropositionReport rep = proposition_check(g, constant_field(1.0));
    CHECK(rep.twice_c == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rep.twice_rho2_c == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rep.rhs == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("a = 1/2: equality at one quarter") {
    const PropositionReport rep = proposition_check(g, constant_field(0.5));
    CHECK(rep.twice_rho2_c == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(rep.rhs == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(std::fabs(rep.twice_rho2_c - rep.rhs) < 1e-6);
  }

  SUBCASE("zero flux: both sides vanish") {
    const PropositionReport rep = proposition_check(g, constant_field(0.0));
    CHECK(rep.twice_rho2_c == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(rep.rhs == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  }

  SUBCASE("bumpy metric still satisfies the chain") {
    const ConformalMetric bumpy(group(),
                                InvariantScalar(group(), 0.0, {RadialBump{group().base, 0.2, 1.3}}));
    const PropositionReport rep = proposition_check(bumpy, constant_field(1.0));
    CHECK(rep.twice_rho2_c + 1e-6 >= rep.rhs);
    CHECK(rep.rho_g < 1.0);
  }
}

TEST_CASE("radon bound report") {
  const ConformalMetric g = flat_metric();

  SUBCASE("requires the base metric") {
    const ConformalMetric bumpy(group(),
                                InvariantScalar(group(), 0.0, {RadialBump{group().base, 0.1, 1.0}}));
    CHECK_THROWS_AS(radon_bound_check(bumpy, constant_field(1.0), 1.0, {1.0}, {group().base}),
                    std::invalid_argument);
    const ConformalMetric scaled(group(), InvariantScalar(group(), 0.5, {}));
    CHECK_THROWS_AS(radon_bound_check(scaled, constant_field(1.0), 1.0, {1.0}, {group().base}),
                    std::invalid_argument);
    CHECK_THROWS_AS(radon_bound_check(g, constant_field(1.0), 0.0, {1.0}, {group().base}),
                    std::invalid_argument);
  }

  SUBCASE("trivial exact part") {
    const RadonBoundReport rep =
        radon_bound_check(g, constant_field(1.0), 1.0, {1.0, 2.0, 4.0}, {group().base});
    CHECK(rep.entry.size() == 3);
    CHECK(rep.max_ratio == 0.0);
    for (const auto& e : rep.entry) CHECK(e.integral == 0.0);
  }

  SUBCASE("bump holonomies stay under the bound") {
    const MagneticField sigma(1.0,
                              InvariantOneForm(group(), {RadialBump{group().base, 0.3, 1.0}}));
    const RadonBoundReport rep =
        radon_bound_check(g, sigma, 1.0, {0.05, 0.5, 1.0, 2.0}, {group().base});
    CHECK(rep.bound == doctest::Approx(2.0 * kPi).epsilon(1e-15));
    CHECK(rep.max_ratio > 0.0);
    CHECK(rep.max_ratio < 1.0);
    CHECK(std::fabs(rep.entry.front().ratio_sharp) < 0.05);
    // Interior entry matches the exact holonomy.
    const double m = std::cosh(0.5) - 1.0;
    const double z = 1.0 - m / (std::cosh(1.0) - 1.0);
    CHECK(rep.entry[1].integral ==
          doctest::Approx(2.0 * kPi * 0.3 * m * z * z * z * z).epsilon(1e-12));
  }
}
