#include "magflow/radon.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace magflow {
namespace {

constexpr double kPi = 3.14159265358979323846;

void require_kernel_args(double r, double spectral, const char* where) {
  if (!std::isfinite(r) || r < 0.0) {
    throw std::invalid_argument(std::string(where) + ": radius must be finite and nonnegative");
  }
  if (r > 700.0) {
    throw std::invalid_argument(std::string(where) + ": radius overflows cosh");
  }
  if (!std::isfinite(spectral)) {
    throw std::invalid_argument(std::string(where) + ": spectral parameter must be finite");
  }
}

// Substituted kernel integral.  With u = r - w^2 the square-root vanishing of
// cosh r - cosh u at u = r becomes analytic in w, and the difference of cosh
// is evaluated as 2 sinh((r-u)/2) sinh((r+u)/2) to avoid cancellation.  The
// node count follows the total phase so oscillatory (real s) and steeply
// growing (imaginary s) integrands keep a fixed resolution per scale.
double q_kernel_core(double r, double spectral, bool imaginary) {
  if (r == 0.0) return 0.0;
  const double phase = std::fabs(spectral) * r;
  const int n = 64 + 8 * static_cast<int>(std::ceil(phase / (2.0 * kPi)));
  const GaussLegendre gl(n);
  const double wmax = std::sqrt(r);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double w = 0.5 * wmax * (1.0 + gl.node[i]);
    const double u = r - w * w;
    const double diff = 2.0 * std::sinh(0.5 * w * w) * std::sinh(r - 0.5 * w * w);
    const double osc = imaginary ? std::cosh(spectral * u) : std::cos(spectral * u);
    total += gl.weight[i] * 2.0 * w * osc * std::sqrt(diff);
  }
  return 4.0 * std::sqrt(2.0) * 0.5 * wmax * total;
}

void require_zero_mean(const InvariantScalar& h, const char* where) {
  const double mass = h.integral();
  if (std::fabs(mass) > 1e-8) {
    throw std::invalid_argument(std::string(where) +
                                ": field must have zero mean over the surface (integral = " +
                                std::to_string(mass) + ")");
  }
}

// Angle subtended inside the disk of radius r by the circle of radius rho
// about a point at distance delta from the disk center (law of cosines).
double overlap_angle(double delta, double rho, double r) {
  const double num = std::cosh(delta) * std::cosh(rho) - std::cosh(r);
  const double den = std::sinh(delta) * std::sinh(rho);
  if (num <= -den) return 2.0 * kPi;
  if (num >= den) return 0.0;
  return 2.0 * std::acos(num / den);
}

double bump_profile(const RadialBump& b, double rho) {
  const double m_sup = std::cosh(b.support) - 1.0;
  const double z = 1.0 - (std::cosh(rho) - 1.0) / m_sup;
  if (z <= 0.0) return 0.0;
  const double z2 = z * z;
  return b.amplitude * z2 * z2;
}

// Integral of one bump translate sitting at distance delta from the disk
// center, against the hyperbolic area of the part of the disk it covers.
// Radii fully inside the disk contribute a plain 2 pi band; the partial band
// has square-root behavior of the overlap angle at both ends, absorbed by a
// sin^2 reparametrization.
double site_integral(const RadialBump& b, double delta, double r) {
  if (delta >= r + b.support) return 0.0;
  const GaussLegendre gl(48);
  double total = 0.0;
  const double full_hi = std::min(b.support, r - delta);
  if (full_hi > 0.0) {
    const double mid = 0.5 * full_hi, hw = 0.5 * full_hi;
    for (int i = 0; i < 48; ++i) {
      const double rho = mid + hw * gl.node[i];
      total += gl.weight[i] * hw * 2.0 * kPi * bump_profile(b, rho) * std::sinh(rho);
    }
  }
  if (delta < 1e-12) return total;  // concentric within noise: no partial band
  const double lo = std::fabs(r - delta);
  const double hi = std::min(b.support, r + delta);
  if (hi > lo) {
    const double span = hi - lo;
    for (int i = 0; i < 48; ++i) {
      const double t = 0.25 * kPi * (1.0 + gl.node[i]);
      const double st = std::sin(t), ct = std::cos(t);
      const double rho = lo + span * st * st;
      const double drho = span * 2.0 * st * ct;
      total += gl.weight[i] * 0.25 * kPi * drho * overlap_angle(delta, rho, r) *
               bump_profile(b, rho) * std::sinh(rho);
    }
  }
  return total;
}

double require_radon_radius(double r, const char* where) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument(std::string(where) + ": radius must be positive and finite");
  }
  return r;
}

// Shared core of the site-sum transform; the ball may cover more group
// elements than radius r needs, extra sites are filtered by distance.
double sites_total(const InvariantScalar& h, const GroupBall& ball, const Point& cx, double r) {
  double total = h.constant_part() * disk_area(r);
  for (const RadialBump& b : h.bumps()) {
    for (const Isometry& m : ball.element) {
      const double delta = hyp_distance(cx, apply(m, b.center));
      if (delta < r + b.support) total += site_integral(b, delta, r);
    }
  }
  return total;
}

double site_reach(const InvariantScalar& h, const Point& cx, double r) {
  const SurfaceGroup& g = h.group();
  double reach = 0.0;
  for (const RadialBump& b : h.bumps()) {
    reach = std::max(reach, r + b.support + hyp_distance(g.base, b.center));
  }
  return reach + hyp_distance(g.base, cx) + 0.25;
}

}  // namespace

double q_kernel_real(double r, double s) {
  require_kernel_args(r, s, "q_kernel_real");
  return q_kernel_core(r, s, false);
}

double q_kernel_imag(double r, double alpha) {
  require_kernel_args(r, alpha, "q_kernel_imag");
  if (alpha < 0.0 || alpha > 0.5) {
    throw std::invalid_argument(
        "q_kernel_imag: alpha must lie in [0, 1/2] (eigenvalue below the spectrum)");
  }
  return q_kernel_core(r, alpha, true);
}

std::vector<KernelSample> kernel_table(const std::vector<double>& r_grid,
                                       const std::vector<double>& s_values,
                                       const std::vector<double>& alpha_values) {
  std::vector<KernelSample> rows;
  rows.reserve(r_grid.size() * (s_values.size() + alpha_values.size()));
  for (double r : r_grid) {
    for (double s : s_values) rows.push_back({r, s, false, q_kernel_real(r, s)});
    for (double a : alpha_values) rows.push_back({r, a, true, q_kernel_imag(r, a)});
  }
  return rows;
}

MeanValueCheck eigenfunction_mean_value_check(double s, const Point& center, double r) {
  require_radon_radius(r, "eigenfunction_mean_value_check");
  if (!std::isfinite(s)) {
    throw std::invalid_argument("eigenfunction_mean_value_check: s must be finite");
  }
  const double q = q_kernel_real(r, s);
  const auto re = [s](const Point& p) { return std::sqrt(p.y) * std::cos(s * std::log(p.y)); };
  const auto im = [s](const Point& p) { return std::sqrt(p.y) * std::sin(s * std::log(p.y)); };
  const GeodesicCircle disk{center, r};
  MeanValueCheck out;
  out.lhs_re = disk_quadrature(disk, re, 48);
  out.lhs_im = disk_quadrature(disk, im, 48);
  out.rhs_re = q * re(center);
  out.rhs_im = q * im(center);
  const double d_re = std::fabs(out.lhs_re - out.rhs_re) / (std::fabs(out.rhs_re) + 1.0);
  const double d_im = std::fabs(out.lhs_im - out.rhs_im) / (std::fabs(out.rhs_im) + 1.0);
  out.residual = std::max(d_re, d_im);
  return out;
}

double disk_radon(const InvariantScalar& h, const Point& x, double r, int order) {
  require_zero_mean(h, "disk_radon");
  require_radon_radius(r, "disk_radon");
  if (order < 8) throw std::invalid_argument("disk_radon: order must be >= 8");
  const Point cx = reduce_point(h.group(), x).point;
  const GeodesicCircle disk{cx, r};
  return disk_quadrature(disk, [&h](const Point& p) { return h.value(p); }, order);
}

double disk_radon_sites(const InvariantScalar& h, const Point& x, double r) {
  require_zero_mean(h, "disk_radon_sites");
  require_radon_radius(r, "disk_radon_sites");
  const Point cx = reduce_point(h.group(), x).point;
  if (h.bumps().empty()) return h.constant_part() * disk_area(r);
  const GroupBall ball = enumerate_group_ball(h.group(), site_reach(h, cx, r));
  return sites_total(h, ball, cx, r);
}

std::vector<GrowthRow> growth_check(double s, int n_max) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw std::invalid_argument("growth_check: s must be positive");
  }
  if (n_max < 1) throw std::invalid_argument("growth_check: n_max must be >= 1");
  std::vector<GrowthRow> rows;
  rows.reserve(static_cast<std::size_t>(n_max));
  double prev = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    GrowthRow row;
    row.n = n;
    row.r = kPi * (2.0 * n + 0.5) / s;
    row.value = q_kernel_real(row.r, s);
    row.bound = 4.0 * std::sqrt(2.0) * std::sqrt(std::cosh(row.r)) / (s * (1.0 + s * s));
    if (row.value < row.bound) {
      throw std::runtime_error("growth_check: kernel below the crest bound at n=" +
                               std::to_string(n) + " (value " + std::to_string(row.value) +
                               ", bound " + std::to_string(row.bound) + ")");
    }
    if (n > 1 && row.value <= prev) {
      throw std::runtime_error("growth_check: kernel failed to grow at n=" + std::to_string(n));
    }
    prev = row.value;
    rows.push_back(row);
  }
  return rows;
}

RadonProbeReport boundedness_probe(const InvariantScalar& h, const std::vector<double>& r_grid,
                                   const std::vector<Point>& x_grid) {
  require_zero_mean(h, "boundedness_probe");
  if (r_grid.empty() || x_grid.empty()) {
    throw std::invalid_argument("boundedness_probe: empty evaluation grid");
  }
  RadonProbeReport report;
  report.radius = r_grid;
  std::sort(report.radius.begin(), report.radius.end());
  for (double r : report.radius) require_radon_radius(r, "boundedness_probe");
  report.center.reserve(x_grid.size());
  for (const Point& x : x_grid) report.center.push_back(reduce_point(h.group(), x).point);

  // One ball enumeration covers every (center, radius) pair; distance
  // filtering inside the site sum keeps smaller radii consistent with a
  // standalone evaluation.
  GroupBall ball;
  if (!h.bumps().empty()) {
    double reach = 0.0;
    for (const Point& cx : report.center) {
      reach = std::max(reach, site_reach(h, cx, report.radius.back()));
    }
    ball = enumerate_group_ball(h.group(), reach);
  }

  report.value.assign(report.center.size(), std::vector<double>(report.radius.size(), 0.0));
  report.running_max.assign(report.radius.size(), 0.0);
  double run = 0.0;
  for (std::size_t j = 0; j < report.radius.size(); ++j) {
    for (std::size_t i = 0; i < report.center.size(); ++i) {
      const double v = h.bumps().empty()
                           ? h.constant_part() * disk_area(report.radius[j])
                           : sites_total(h, ball, report.center[i], report.radius[j]);
      report.value[i][j] = v;
      run = std::max(run, std::fabs(v));
    }
    report.running_max[j] = run;
  }
  report.max_abs = run;
  return report;
}

}  // namespace magflow
