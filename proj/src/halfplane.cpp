#include "magflow/halfplane.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace magflow {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument(what); }

void require_point(const Point& p, const char* who) {
  if (!point_valid(p)) {
    fail(std::string(who) + ": point outside the upper half-plane (x=" +
         std::to_string(p.x) + ", y=" + std::to_string(p.y) + ")");
  }
}

void require_radius(double r, const char* who) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    fail(std::string(who) + ": radius must be positive and finite, got " + std::to_string(r));
  }
}

// Unit-determinant check.  ad - bc cancels to roundoff in the entry scale
// squared, so the tolerance grows with the matrix norm; the guard is meant
// to catch wrong inputs (det far from 1 at moderate size), not fp drift
// along long words.
void require_unimodular(const Isometry& m, const char* who) {
  const double n2 = m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d;
  if (!(std::fabs(m.det() - 1.0) <= 1e-6 + 1e-12 * n2)) {
    fail(std::string(who) + ": matrix is not unit-determinant (det=" + std::to_string(m.det()) + ")");
  }
}

}  // namespace

bool point_valid(const Point& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && p.y > 0.0;
}

double cosh_distance_m1(const Point& p, const Point& q) {
  const double dx = p.x - q.x;
  const double dy = p.y - q.y;
  return (dx * dx + dy * dy) / (2.0 * p.y * q.y);
}

double hyp_distance(const Point& p, const Point& q) {
  require_point(p, "hyp_distance");
  require_point(q, "hyp_distance");
  // cosh d = 1 + m  =>  d = 2 asinh(sqrt(m/2)); stable for all m >= 0,
  // no cancellation near zero (plain acosh(1+m) loses half the digits there).
  const double m = cosh_distance_m1(p, q);
  return 2.0 * std::asinh(std::sqrt(0.5 * m));
}

Isometry Isometry::identity() { return Isometry{1.0, 0.0, 0.0, 1.0}; }

Isometry Isometry::vertical_translation(double t) {
  const double e = std::exp(0.5 * t);
  return Isometry{e, 0.0, 0.0, 1.0 / e};
}

Isometry Isometry::rotation_about_i(double phi) {
  // Fixes i; tangent vectors at i rotate counterclockwise by phi.
  const double c = std::cos(0.5 * phi);
  const double s = std::sin(0.5 * phi);
  return Isometry{c, s, -s, c};
}

Isometry Isometry::i_to_point(const Point& p) {
  require_point(p, "Isometry::i_to_point");
  const double r = std::sqrt(p.y);
  return Isometry{r, p.x / r, 0.0, 1.0 / r};
}

Isometry Isometry::point_to_i(const Point& p) { return i_to_point(p).inverse(); }

Isometry Isometry::inverse() const {
  // Adjugate; det == 1 so no division.
  return Isometry{d, -b, -c, a};
}

double Isometry::det() const { return a * d - b * c; }

Isometry compose(const Isometry& m1, const Isometry& m2) {
  Isometry r{m1.a * m2.a + m1.b * m2.c, m1.a * m2.b + m1.b * m2.d,
             m1.c * m2.a + m1.d * m2.c, m1.c * m2.b + m1.d * m2.d};
  // Rescale to unit determinant so rounding does not accumulate along words.
  const double dt = r.det();
  if (dt > 0.0) {
    const double s = 1.0 / std::sqrt(dt);
    r.a *= s; r.b *= s; r.c *= s; r.d *= s;
  }
  return r;
}

Point apply(const Isometry& m, const Point& p) {
  require_unimodular(m, "apply");
  require_point(p, "apply");
  const double u = m.c * p.x + m.d;
  const double v = m.c * p.y;
  const double q = u * u + v * v;
  if (!(q > 0.0) || !std::isfinite(q)) {
    fail("apply: Moebius map degenerate at the given point");
  }
  const double nx = (m.a * p.x + m.b) * u + m.a * p.y * v;
  return Point{nx / q, p.y * m.det() / q};
}

double angle_shift(const Isometry& m, const Point& p) {
  require_unimodular(m, "angle_shift");
  require_point(p, "angle_shift");
  // d/dz (az+b)/(cz+d) = det / (cz+d)^2; arg of that is -2 arg(cz+d).
  return -2.0 * std::atan2(m.c * p.y, m.c * p.x + m.d);
}

double circle_length(double r) {
  require_radius(r, "circle_length");
  return kTwoPi * std::sinh(r);
}

double disk_area(double r) {
  require_radius(r, "disk_area");
  // 2 pi (cosh r - 1) = 4 pi sinh^2(r/2), stable for small r.
  const double s = std::sinh(0.5 * r);
  return 2.0 * kTwoPi * s * s;
}

namespace {

// Circle of radius rho about i, at polar angle phi (phi = 0 at the top point
// (0, e^rho), counterclockwise):  z = Cayley(tanh(rho/2) e^{i phi}) with
// Cayley(w) = i (1+w)/(1-w).  Written out in reals:
//   D = 1 - 2T cos(phi) + T^2,  x = -2T sin(phi)/D,  y = (1-T^2)/D.
struct CirclePointAtI {
  double x, y;
  double dx_dphi, dy_dphi;
};

CirclePointAtI circle_at_i(double rho, double phi) {
  const double t = std::tanh(0.5 * rho);
  const double cp = std::cos(phi);
  const double sp = std::sin(phi);
  const double den = 1.0 - 2.0 * t * cp + t * t;
  CirclePointAtI r;
  r.x = -2.0 * t * sp / den;
  r.y = (1.0 - t * t) / den;
  const double den2 = den * den;
  r.dx_dphi = -2.0 * t * ((1.0 + t * t) * cp - 2.0 * t) / den2;
  r.dy_dphi = -2.0 * t * (1.0 - t * t) * sp / den2;
  return r;
}

}  // namespace

Point polar_point(const Point& center, double phi, double rho) {
  require_point(center, "polar_point");
  if (!(rho >= 0.0) || !std::isfinite(rho)) {
    fail("polar_point: rho must be nonnegative, got " + std::to_string(rho));
  }
  const CirclePointAtI z = circle_at_i(rho, phi);
  return Point{center.x + center.y * z.x, center.y * z.y};
}

PolarCoord polar_coordinates(const Point& center, const Point& p) {
  require_point(center, "polar_coordinates");
  require_point(p, "polar_coordinates");
  PolarCoord out;
  out.rho = hyp_distance(center, p);
  // Move center to i, then w = (z - i)/(z + i) has arg equal to the polar angle.
  const std::complex<double> z((p.x - center.x) / center.y, p.y / center.y);
  const std::complex<double> w = (z - std::complex<double>(0.0, 1.0)) /
                                 (z + std::complex<double>(0.0, 1.0));
  out.phi = (std::abs(w) == 0.0) ? 0.0 : std::arg(w);
  return out;
}

Point circle_point(const GeodesicCircle& c, double t) {
  return circle_point_velocity(c, t, nullptr, nullptr);
}

Point circle_point_velocity(const GeodesicCircle& c, double t, double* vx, double* vy) {
  require_point(c.center, "circle_point");
  require_radius(c.radius, "circle_point");
  const double sh = std::sinh(c.radius);
  const double phi = t / sh;
  const CirclePointAtI z = circle_at_i(c.radius, phi);
  if (vx != nullptr && vy != nullptr) {
    *vx = c.center.y * z.dx_dphi / sh;
    *vy = c.center.y * z.dy_dphi / sh;
  }
  return Point{c.center.x + c.center.y * z.x, c.center.y * z.y};
}

GaussLegendre::GaussLegendre(int n) {
  if (n < 1) fail("GaussLegendre: need at least one node");
  node.assign(n, 0.0);
  weight.assign(n, 0.0);
  // Newton iteration from the Chebyshev-angle initial guess; nodes symmetric.
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 64; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    node[i] = -x;
    node[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weight[i] = w;
    weight[n - 1 - i] = w;
  }
}

double disk_quadrature(const GeodesicCircle& c, const ScalarField& f, int order,
                       const std::vector<double>& radial_breaks) {
  require_point(c.center, "disk_quadrature");
  require_radius(c.radius, "disk_quadrature");
  if (order < 2) fail("disk_quadrature: order must be >= 2");

  // Radial panels: [0, r] split at the supplied break radii.
  std::vector<double> edges{0.0};
  for (double b : radial_breaks) {
    if (b > 1e-14 && b < c.radius - 1e-14) edges.push_back(b);
  }
  edges.push_back(c.radius);
  std::sort(edges.begin(), edges.end());

  const GaussLegendre rad(order);
  const GaussLegendre ang(2 * order);
  double total = 0.0;
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    const double mid = 0.5 * (edges[e] + edges[e + 1]);
    const double hw = 0.5 * (edges[e + 1] - edges[e]);
    for (int i = 0; i < order; ++i) {
      const double rho = mid + hw * rad.node[i];
      const double wr = hw * rad.weight[i] * std::sinh(rho);
      for (int j = 0; j < 2 * order; ++j) {
        const double phi = kPi * (1.0 + ang.node[j]);
        const Point p = polar_point(c.center, phi, rho);
        const double v = f(p);
        if (!std::isfinite(v)) {
          throw std::runtime_error(
              "disk_quadrature: integrand not finite at node (x=" + std::to_string(p.x) +
              ", y=" + std::to_string(p.y) + ", rho=" + std::to_string(rho) +
              ", phi=" + std::to_string(phi) + ")");
        }
        total += v * wr * kPi * ang.weight[j];
      }
    }
  }
  return total;
}

double circle_quadrature(const GeodesicCircle& c, const OneFormField& beta, int order) {
  require_point(c.center, "circle_quadrature");
  require_radius(c.radius, "circle_quadrature");
  if (order < 2) fail("circle_quadrature: order must be >= 2");
  // Uniform nodes in the angle: the integrand is periodic and piecewise
  // smooth, and the node count scales with the circle length.
  const double len = circle_length(c.radius);
  const int n = order;
  const double dt = len / n;
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    double vx = 0.0, vy = 0.0;
    const Point p = circle_point_velocity(c, (j + 0.5) * dt, &vx, &vy);
    const Covector b = beta(p);
    const double v = b.cx * vx + b.cy * vy;
    if (!std::isfinite(v)) {
      throw std::runtime_error("circle_quadrature: integrand not finite at node (x=" +
                               std::to_string(p.x) + ", y=" + std::to_string(p.y) + ")");
    }
    total += v * dt;
  }
  return total;
}

}  // namespace magflow
