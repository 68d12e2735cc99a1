#include "magflow/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace magflow {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kFourPi = 4.0 * kPi;

// Low-discrepancy sequence for sup-sampling (van der Corput / Halton).
double radical_inverse(int base, int i) {
  double inv = 1.0 / base, f = inv, x = 0.0;
  while (i > 0) {
    x += f * (i % base);
    i /= base;
    f *= inv;
  }
  return x;
}

}  // namespace

ConformalMetric::ConformalMetric(const SurfaceGroup& g, InvariantScalar u, int quad_order)
    : group_(&g), u_(std::move(u)), order_(quad_order) {
  if (order_ < 4) throw std::invalid_argument("ConformalMetric: quadrature order too small");
  if (constant_factor()) {
    area_ = kFourPi * std::exp(2.0 * u_.constant_part());
  } else {
    area_ = domain_quadrature(
        *group_, [this](const Point& p) { return std::exp(2.0 * u_.value(p)); }, order_,
        radial_breaks());
  }
  if (!(area_ > 0.0) || !std::isfinite(area_)) {
    throw std::runtime_error("ConformalMetric: non-positive area");
  }
}

double ConformalMetric::conformal_factor(const Point& p) const {
  return std::exp(u_.value(p));
}

double ConformalMetric::gauss_curvature(const Point& p) const {
  const ScalarJet j = u_.jet(p);
  const double lap0 = p.y * p.y * j.lap;
  return std::exp(-2.0 * j.value) * (-1.0 - lap0);
}

MagneticField::MagneticField(double a, InvariantOneForm beta0)
    : a_(a), beta0_(std::move(beta0)) {
  if (!std::isfinite(a_)) throw std::invalid_argument("MagneticField: a not finite");
}

double MagneticField::f_density(const ConformalMetric& g, const Point& p) const {
  return std::exp(-2.0 * g.u().value(p)) * (a_ + beta0_.density(p));
}

double metric_area(const ConformalMetric& g) { return g.area(); }

double conformality_coefficient(const ConformalMetric& g) {
  if (g.constant_factor()) return 1.0;
  const double lambda = std::sqrt(g.area() / kFourPi);
  const double mean = domain_quadrature(
      g.group(), [&](const Point& p) { return std::exp(g.u().value(p)); },
      g.quadrature_order(), g.radial_breaks());
  return lambda * mean / g.area();
}

double total_flux(const MagneticField& sigma) { return kFourPi * sigma.a(); }

double helicity_formula(const ConformalMetric& g, const MagneticField& sigma) {
  const double flux = total_flux(sigma);
  return 2.0 * kPi * g.area() - flux * flux / 2.0;
}

double helicity_integral(const ConformalMetric& g, const MagneticField& sigma,
                         int order, int fiber_order) {
  if (fiber_order < 4 || fiber_order % 2 != 0) {
    throw std::invalid_argument("helicity_integral: fiber order must be even and >= 4");
  }
  std::vector<double> breaks = g.radial_breaks();
  for (double b : sigma.beta0().base_radial_breaks()) breaks.push_back(b);

  const double a = sigma.a();
  const double dth = 2.0 * kPi / fiber_order;

  // tau(F) integrated over the fiber: the 1 - a f part is angle-free, the
  // beta(v) part is odd in v and cancels on the symmetric grid.
  const ScalarField integrand = [&](const Point& p) {
    const ScalarJet j = g.u().jet(p);
    const double e2u = std::exp(2.0 * j.value);
    const double h0 = sigma.exact_density(p);
    double fiber = 2.0 * kPi * (e2u - a * (a + h0));

    const Covector b0 = sigma.beta0().value(p);
    const Covector beta{b0.cx + a * j.dy, b0.cy - a * j.dx};
    const double vlen = p.y * std::exp(-j.value);  // chart length of a g-unit vector
    for (int k = 0; k < fiber_order; ++k) {
      const double th = dth * k;
      const double bv = beta.cx * vlen * std::cos(th) + beta.cy * vlen * std::sin(th);
      fiber -= e2u * bv * dth;
    }
    return fiber;
  };
  return domain_quadrature(g.group(), integrand, order, breaks);
}

std::optional<double> s_h_value(const ConformalMetric& g, const MagneticField& sigma) {
  const double flux = total_flux(sigma);
  if (flux == 0.0) return std::nullopt;
  return std::sqrt(kFourPi * g.area()) / std::fabs(flux);
}

Covector relative_primitive(const ConformalMetric& g, const MagneticField& sigma,
                            const Point& p) {
  const Covector b0 = sigma.beta0().value(p);
  const ScalarJet j = g.u().jet(p);
  return Covector{b0.cx + sigma.a() * j.dy, b0.cy - sigma.a() * j.dx};
}

double contact_primitive_value(const ConformalMetric& g, const MagneticField& sigma,
                               double s, const Point& p, double theta) {
  const Covector beta = relative_primitive(g, sigma, p);
  const double vlen = p.y / g.conformal_factor(p);
  const double bv = beta.cx * vlen * std::cos(theta) + beta.cy * vlen * std::sin(theta);
  return 1.0 - sigma.a() * s * s * sigma.f_density(g, p) - s * bv;
}

PrimitiveRange contact_primitive_range(const ConformalMetric& g, const MagneticField& sigma,
                                       double s, int space_samples, int fiber_samples) {
  if (space_samples < 1 || fiber_samples < 1) {
    throw std::invalid_argument("contact_primitive_range: sample counts must be positive");
  }
  const SurfaceGroup& grp = g.group();
  PrimitiveRange range{1e300, -1e300};
  for (int i = 0; i < space_samples; ++i) {
    const double phi = 2.0 * kPi * radical_inverse(2, i + 1);
    const double frac = radical_inverse(3, i + 1);
    const double rho = octagon_boundary_distance(grp, phi) * std::sqrt(frac);
    const Point p = polar_point(grp.base, phi, rho);
    for (int k = 0; k < fiber_samples; ++k) {
      const double th = 2.0 * kPi * k / fiber_samples;
      const double v = contact_primitive_value(g, sigma, s, p, th);
      range.min_value = std::min(range.min_value, v);
      range.max_value = std::max(range.max_value, v);
    }
  }
  return range;
}

}  // namespace magflow
