#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "magflow/field.hpp"
#include "magflow/flow.hpp"
#include "magflow/surface.hpp"

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

double angle_gap(double a, double b) {
  return std::fabs(std::remainder(a - b, 2.0 * kPi));
}

}  // namespace

TEST_CASE("vector field: geodesic and horocycle anchors") {
  const ConformalMetric g = flat_metric();

  const auto vert = vector_field(g, constant_field(0.0), 1.0, PhaseState{0.0, 1.0, kPi / 2});
  CHECK(vert[0] == doctest::Approx(0.0).epsilon(1e-15).scale(1.0));
  CHECK(vert[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(vert[2] == doctest::Approx(0.0).epsilon(1e-14).scale(1.0));

  // s f = 1 and theta = 0: horizontal motion, a horocycle.
  const auto horo = vector_field(g, constant_field(1.0), 1.0, PhaseState{0.4, 2.5, 0.0});
  CHECK(horo[0] == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(horo[1] == doctest::Approx(0.0).epsilon(1e-14).scale(1.0));
  CHECK(horo[2] == doctest::Approx(0.0).epsilon(1e-14).scale(1.0));

  // Geodesic angular equation dtheta/dt = -cos theta.
  for (double th : {0.3, 1.1, 2.0, 4.4}) {
    const auto v = vector_field(g, constant_field(0.0), 1.0, PhaseState{0.2, 0.7, th});
    CHECK(v[2] == doctest::Approx(-std::cos(th)).epsilon(1e-13).scale(1.0));
  }

  CHECK_THROWS_AS(vector_field(g, constant_field(0.0), 1.0, PhaseState{0.0, 0.0, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("unit g-speed holds by representation") {
  const ConformalMetric g(group(),
                          InvariantScalar(group(), 0.1, {RadialBump{group().base, 0.2, 1.2}}));
  const MagneticField sigma(0.8, InvariantOneForm(group(), {RadialBump{group().base, 0.3, 1.0}}));
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> xr(-0.5, 0.5), yr(0.5, 2.0), tr(0.0, 2.0 * kPi);
  for (int i = 0; i < 25; ++i) {
    const PhaseState st{xr(rng), yr(rng), tr(rng)};
    const auto v = vector_field(g, sigma, 1.3, st);
    const double ew = std::exp(g.u().value(st.point())) / st.y;  // e^{w}
    const double speed = ew * std::hypot(v[0], v[1]);
    CHECK(speed == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("vertical geodesic: closed form endpoint and 4th-order convergence") {
  const ConformalMetric g = flat_metric();
  const MagneticField zero = constant_field(0.0);
  const PhaseState start{0.0, 1.0, kPi / 2};

  const Trajectory fine = integrate(g, zero, 1.0, start, 2.0, 1e-3);
  const PhaseState& end = fine.state.back();
  CHECK(std::fabs(end.x) < 1e-12);
  CHECK(end.y == doctest::Approx(std::exp(2.0)).epsilon(1e-9));
  CHECK(angle_gap(end.theta, kPi / 2) < 1e-12);
  CHECK(fine.max_step_error < 1e-10);

  double err[3];
  const double dts[3] = {1e-2, 5e-3, 2.5e-3};
  for (int i = 0; i < 3; ++i) {
    const Trajectory t = integrate(g, zero, 1.0, start, 2.0, dts[i]);
    err[i] = std::fabs(t.state.back().y - std::exp(2.0));
  }
  CHECK(err[0] / err[1] > 12.0);
  CHECK(err[0] / err[1] < 20.0);
  CHECK(err[1] / err[2] > 12.0);
  CHECK(err[1] / err[2] < 20.0);
}

TEST_CASE("constant curvature circle orbits: radius, center, period") {
  const ConformalMetric g = flat_metric();

  SUBCASE("kappa = 2") {
    const CircleOrbit oracle = circle_orbit_oracle(2.0);
    CHECK(oracle.radius == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-15));
    CHECK(oracle.period == doctest::Approx(2.0 * kPi / std::sqrt(3.0)).epsilon(1e-15));

    const Trajectory t =
        integrate(g, constant_field(2.0), 1.0, PhaseState{0.0, 1.0, 0.0}, 8.0, 1e-3);
    const Point center{0.0, std::sqrt(3.0)};
    double worst = 0.0;
    for (const PhaseState& st : t.state) {
      worst = std::max(worst, std::fabs(hyp_distance(st.point(), center) - oracle.radius));
    }
    CHECK(worst < 1e-6);

    const auto period = detect_period(t, 5e-3);
    REQUIRE(period.has_value());
    CHECK(*period == doctest::Approx(oracle.period).epsilon(0.0).scale(0.0).epsilon(1e-5));
  }

  SUBCASE("kappa = sqrt(2)") {
    const CircleOrbit oracle = circle_orbit_oracle(std::sqrt(2.0));
    CHECK(oracle.period == doctest::Approx(2.0 * kPi).epsilon(1e-14));
    const Trajectory t = integrate(g, constant_field(std::sqrt(2.0)), 1.0,
                                   PhaseState{0.0, 1.0, 0.0}, 13.0, 1e-3);
    const auto period = detect_period(t, 5e-3);
    REQUIRE(period.has_value());
    CHECK(std::fabs(*period - 2.0 * kPi) < 1e-5);
  }

  SUBCASE("intensity scaling: s = 2, a = 1 matches kappa = 2") {
    const Trajectory t =
        integrate(g, constant_field(1.0), 2.0, PhaseState{0.0, 1.0, 0.0}, 8.0, 1e-3);
    const auto period = detect_period(t, 5e-3);
    REQUIRE(period.has_value());
    CHECK(std::fabs(*period - 2.0 * kPi / std::sqrt(3.0)) < 1e-5);
  }

  CHECK_THROWS_AS(circle_orbit_oracle(1.0), std::invalid_argument);
  CHECK_THROWS_AS(circle_orbit_oracle(0.5), std::invalid_argument);
  CHECK(circle_orbit_oracle(1e6).radius < 1.1e-6);
}

TEST_CASE("geodesics never close") {
  const ConformalMetric g = flat_metric();
  const Trajectory t =
      integrate(g, constant_field(0.0), 1.0, PhaseState{0.3, 1.0, 0.9}, 10.0, 2e-3);
  CHECK_FALSE(detect_period(t, 1e-3).has_value());
}

TEST_CASE("deck transformation equivariance") {
  const ConformalMetric g(group(),
                          InvariantScalar(group(), 0.0, {RadialBump{group().base, 0.1, 1.2}}));
  const MagneticField sigma(1.0, InvariantOneForm(group(), {RadialBump{group().base, 0.2, 1.0}}));

  const PhaseState start{0.1, 0.9, 0.7};
  const Isometry gamma = group().gen[2];
  const PhaseState mapped_start{apply(gamma, start.point()).x, apply(gamma, start.point()).y,
                                start.theta + angle_shift(gamma, start.point())};

  const Trajectory t1 = integrate(g, sigma, 1.1, start, 3.0, 2e-3);
  const Trajectory t2 = integrate(g, sigma, 1.1, mapped_start, 3.0, 2e-3);

  for (std::size_t i = 0; i < t1.state.size(); i += 250) {
    const Point moved = apply(gamma, t1.state[i].point());
    const double th_moved = t1.state[i].theta + angle_shift(gamma, t1.state[i].point());
    CHECK(hyp_distance(moved, t2.state[i].point()) < 1e-7);
    CHECK(angle_gap(th_moved, t2.state[i].theta) < 1e-7);
  }
}

TEST_CASE("error monitor reports and aborts") {
  const ConformalMetric g = flat_metric();
  const Trajectory ok =
      integrate(g, constant_field(2.0), 1.0, PhaseState{0.0, 1.0, 0.0}, 2.0, 1e-2);
  CHECK(ok.max_step_error > 0.0);
  CHECK(ok.max_step_error < 1e-8);

  CHECK_THROWS_AS(
      integrate(g, constant_field(2.0), 1.0, PhaseState{0.0, 1.0, 0.0}, 2.0, 0.5, 1e-16),
      std::runtime_error);
  CHECK_THROWS_AS(integrate(g, constant_field(0.0), 1.0, PhaseState{0.0, 1.0, 0.0}, -1.0, 0.1),
                  std::invalid_argument);
}
