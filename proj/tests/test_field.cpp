#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "magflow/field.hpp"
#include "magflow/halfplane.hpp"
#include "magflow/surface.hpp"

using namespace magflow;

namespace {

constexpr double kPi = 3.14159265358979323846;

const SurfaceGroup& group() {
  static SurfaceGroup g = build_genus2_group();
  return g;
}

InvariantScalar flat_u(double constant = 0.0) {
  return InvariantScalar(group(), constant, {});
}

InvariantScalar bumpy_u(double amp, double support = 1.2) {
  return InvariantScalar(group(), 0.0, {RadialBump{group().base, amp, support}});
}

InvariantOneForm no_beta() { return InvariantOneForm(group(), {}); }

InvariantOneForm bump_beta(double amp = 0.4, double support = 1.1) {
  return InvariantOneForm(group(), {RadialBump{group().base, amp, support}});
}

Point random_domain_point(std::mt19937& rng) {
  const SurfaceGroup& g = group();
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
  std::uniform_real_distribution<double> rad(0.0, 1.0);
  for (;;) {
    const double phi = ang(rng);
    const double rho = rad(rng) * octagon_boundary_distance(g, phi) * 0.999;
    const Point p = polar_point(g.base, phi, rho);
    if (in_fundamental_domain(g, p, 1e-12)) return p;
  }
}

}  // namespace

TEST_CASE("metric area: exact constants and quadrature self-convergence") {
  const ConformalMetric flat(group(), flat_u());
  CHECK(flat.area() == 4.0 * kPi);  // exact path
  CHECK(flat.constant_factor());

  const ConformalMetric doubled(group(), flat_u(std::log(2.0)));
  CHECK(doubled.area() == doctest::Approx(16.0 * kPi).epsilon(1e-15));

  const ConformalMetric bumpy40(group(), bumpy_u(0.1), 40);
  const ConformalMetric bumpy64(group(), bumpy_u(0.1), 64);
  CHECK_FALSE(bumpy40.constant_factor());
  CHECK(bumpy40.area() == doctest::Approx(bumpy64.area()).epsilon(1e-10));
  CHECK(bumpy40.area() > 4.0 * kPi);  // positive bump increases area
}

TEST_CASE("Gauss curvature and Gauss-Bonnet") {
  const ConformalMetric flat(group(), flat_u());
  CHECK(flat.gauss_curvature(Point{0.3, 1.2}) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(flat.gauss_curvature(group().base) == doctest::Approx(-1.0).epsilon(1e-14));

  std::vector<ConformalMetric> metrics;
  metrics.emplace_back(group(), flat_u(0.2));
  metrics.emplace_back(group(), bumpy_u(0.15));
  metrics.emplace_back(
      group(),
      InvariantScalar(group(), 0.05,
                      {RadialBump{group().base, 0.2, 1.3},
                       RadialBump{polar_point(group().base, 2.3, 1.2), -0.12, 0.8}}));
  for (const ConformalMetric& m : metrics) {
    const double total = domain_quadrature(
        group(),
        [&](const Point& p) {
          return m.gauss_curvature(p) * std::exp(2.0 * m.u().value(p));
        },
        48, m.radial_breaks());
    CHECK(total == doctest::Approx(-4.0 * kPi).epsilon(1e-5));
  }
}

TEST_CASE("conformality coefficient") {
  CHECK(conformality_coefficient(ConformalMetric(group(), flat_u())) == 1.0);
  CHECK(conformality_coefficient(ConformalMetric(group(), flat_u(0.7))) == 1.0);

  const ConformalMetric bumpy(group(), bumpy_u(0.2));
  const double rho_g = conformality_coefficient(bumpy);
  CHECK(rho_g < 1.0);
  CHECK(rho_g > 0.9);

  // Cauchy-Schwarz structure: (1/A) int rho^2 mu_g = 1 with rho = lambda e^{-u},
  // so rho_g^2 <= 1 with defect controlled by Var(u).
  const double lambda = std::sqrt(bumpy.area() / (4.0 * kPi));
  const double second_moment = domain_quadrature(
      group(),
      [&](const Point& p) {
        const double r = lambda * std::exp(-bumpy.u().value(p));
        return r * r * std::exp(2.0 * bumpy.u().value(p));
      },
      48, bumpy.radial_breaks());
  CHECK(second_moment / bumpy.area() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("total flux is 4 pi a, independent of beta0") {
  const MagneticField s1(1.0, no_beta());
  const MagneticField s2(1.0, bump_beta());
  const MagneticField s3(0.5, bump_beta(-0.3, 0.9));
  CHECK(total_flux(s1) == 4.0 * kPi);
  CHECK(total_flux(s2) == total_flux(s1));
  CHECK(total_flux(s3) == 2.0 * kPi);
  CHECK(total_flux(MagneticField(0.0, bump_beta())) == 0.0);
}

TEST_CASE("f-density integrates to the total flux") {
  const ConformalMetric g(group(), bumpy_u(0.15));
  const MagneticField sigma(0.75, bump_beta(0.5, 1.0));
  std::vector<double> breaks = g.radial_breaks();
  for (double b : sigma.beta0().base_radial_breaks()) breaks.push_back(b);
  const double integral = domain_quadrature(
      group(),
      [&](const Point& p) {
        return sigma.f_density(g, p) * std::exp(2.0 * g.u().value(p));
      },
      48, breaks);
  CHECK(integral == doctest::Approx(total_flux(sigma)).epsilon(1e-8));
}

TEST_CASE("helicity formula: exact baseline zero and arithmetic cases") {
  const ConformalMetric flat(group(), flat_u());
  CHECK(helicity_formula(flat, MagneticField(1.0, no_beta())) == 0.0);  // exactly

  CHECK(helicity_formula(flat, MagneticField(0.0, bump_beta())) ==
        doctest::Approx(8.0 * kPi * kPi).epsilon(1e-15));
  CHECK(helicity_formula(flat, MagneticField(0.5, no_beta())) ==
        doctest::Approx(6.0 * kPi * kPi).epsilon(1e-14));

  // Depends on [sigma]^2 only.
  const ConformalMetric bumpy(group(), bumpy_u(0.1));
  CHECK(helicity_formula(bumpy, MagneticField(0.8, no_beta())) ==
        helicity_formula(bumpy, MagneticField(-0.8, no_beta())));
}

TEST_CASE("helicity integral matches the formula on the configuration grid") {
  for (double amp : {0.0, 0.1, 0.2}) {
    const ConformalMetric g(group(), amp == 0.0 ? flat_u() : bumpy_u(amp));
    for (double a : {0.0, 0.5, 1.0}) {
      for (int with_beta = 0; with_beta < 2; ++with_beta) {
        const MagneticField sigma(a, with_beta ? bump_beta() : no_beta());
        const double hf = helicity_formula(g, sigma);
        const double hi = helicity_integral(g, sigma);
        if (std::fabs(hf) < 1e-9) {
          CHECK(std::fabs(hi - hf) < 1e-6);
        } else {
          CHECK(hi == doctest::Approx(hf).epsilon(1e-5));
        }
      }
    }
  }
}

TEST_CASE("fiber beta term cancels for any even angular order") {
  const ConformalMetric g(group(), bumpy_u(0.1));
  const MagneticField sigma(1.0, bump_beta());
  const double h8 = helicity_integral(g, sigma, 36, 8);
  const double h32 = helicity_integral(g, sigma, 36, 32);
  CHECK(h8 == doctest::Approx(h32).epsilon(1e-12).scale(1.0));
  CHECK_THROWS_AS(helicity_integral(g, sigma, 36, 7), std::invalid_argument);
}

TEST_CASE("s_h value") {
  const ConformalMetric flat(group(), flat_u());
  const auto sh1 = s_h_value(flat, MagneticField(1.0, no_beta()));
  REQUIRE(sh1.has_value());
  CHECK(std::fabs(*sh1 - 1.0) < 1e-12);

  const auto sh_half = s_h_value(flat, MagneticField(0.5, bump_beta()));
  REQUIRE(sh_half.has_value());
  CHECK(*sh_half == doctest::Approx(2.0).epsilon(1e-13));

  CHECK_FALSE(s_h_value(flat, MagneticField(0.0, bump_beta())).has_value());
}

TEST_CASE("relative primitive: d(beta) recovers sigma + a K mu_g") {
  const ConformalMetric g(group(), bumpy_u(0.18, 1.25));
  const MagneticField sigma(0.7, bump_beta(0.45, 1.05));

  std::mt19937 rng(31);
  for (int i = 0; i < 20; ++i) {
    const Point p = random_domain_point(rng);
    const double h = 3e-5 * p.y;
    // curl of beta in the chart: d(beta) = (d_x beta_y - d_y beta_x) dx dy.
    const double byx =
        (relative_primitive(g, sigma, Point{p.x + h, p.y}).cy -
         relative_primitive(g, sigma, Point{p.x - h, p.y}).cy) /
        (2.0 * h);
    const double bxy =
        (relative_primitive(g, sigma, Point{p.x, p.y + h}).cx -
         relative_primitive(g, sigma, Point{p.x, p.y - h}).cx) /
        (2.0 * h);
    const double curl_density = p.y * p.y * (byx - bxy);  // against mu0

    const double expect =
        sigma.f_density(g, p) * std::exp(2.0 * g.u().value(p)) +
        sigma.a() * g.gauss_curvature(p) * std::exp(2.0 * g.u().value(p));
    CHECK(curl_density == doctest::Approx(expect).epsilon(5e-5).scale(1.0));
  }
}

TEST_CASE("contact primitive: horocycle family and sign-definiteness") {
  const ConformalMetric flat(group(), flat_u());
  const MagneticField sigma(1.0, no_beta());

  std::mt19937 rng(7);
  for (int i = 0; i < 10; ++i) {
    const Point p = random_domain_point(rng);
    const double th = 2.0 * kPi * i / 10.0;
    CHECK(contact_primitive_value(flat, sigma, 1e-9, p, th) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(contact_primitive_value(flat, sigma, 1.0, p, th) ==
          doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
    CHECK(contact_primitive_value(flat, sigma, 2.0, p, th) ==
          doctest::Approx(-3.0).epsilon(1e-12));
  }

  const PrimitiveRange at2 = contact_primitive_range(flat, sigma, 2.0, 128, 8);
  CHECK(at2.sign_definite());
  CHECK(at2.min_value == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(at2.max_value == doctest::Approx(-3.0).epsilon(1e-12));

  const PrimitiveRange at1 = contact_primitive_range(flat, sigma, 1.0, 128, 8);
  CHECK_FALSE(at1.sign_definite());

  // With a perturbed field the s -> infinity regime is sign-definite when f
  // never vanishes.
  const ConformalMetric g(group(), bumpy_u(0.1));
  const MagneticField sigma2(1.0, bump_beta(0.2, 1.0));
  const PrimitiveRange far = contact_primitive_range(g, sigma2, 6.0, 256, 16);
  CHECK(far.sign_definite());
  CHECK(far.max_value < 0.0);
}
