#include "magflow/crit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace magflow {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Circle integrands are resolved with a fixed arclength spacing; the bump
// profiles vary on scales well above this, so the periodic midpoint rule is
// far past its accuracy knee at every radius.
constexpr double kArcSpacing = 0.2;

std::int64_t circle_node_count(double radius) {
  const double len = circle_length(radius);
  return std::max<std::int64_t>(256, static_cast<std::int64_t>(std::ceil(len / kArcSpacing)));
}

int thread_budget() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("MAGFLOW_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1 && static_cast<unsigned long>(v) < hw) hw = static_cast<unsigned>(v);
  }
  return static_cast<int>(hw);
}

// Deterministic parallel reduction: fixed contiguous chunks, each summed
// serially, partials added in chunk order (independent of thread count).
template <class Term>
double chunked_sum(std::int64_t n, const Term& term) {
  constexpr std::int64_t kChunk = 16384;
  const std::int64_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<double> partial(static_cast<std::size_t>(chunks), 0.0);
  const int workers =
      static_cast<int>(std::min<std::int64_t>(thread_budget(), std::max<std::int64_t>(chunks, 1)));
  auto run_chunk = [&](std::int64_t c) {
    const std::int64_t lo = c * kChunk;
    const std::int64_t hi = std::min(n, lo + kChunk);
    double s = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) s += term(i);
    partial[static_cast<std::size_t>(c)] = s;
  };
  if (workers <= 1) {
    for (std::int64_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::atomic<std::int64_t> next{0};
    std::vector<std::exception_ptr> error(static_cast<std::size_t>(workers));
    auto worker = [&](int slot) {
      try {
        for (;;) {
          const std::int64_t c = next.fetch_add(1);
          if (c >= chunks) break;
          run_chunk(c);
        }
      } catch (...) {
        error[static_cast<std::size_t>(slot)] = std::current_exception();
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers - 1));
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker, w);
    worker(0);
    for (auto& t : pool) t.join();
    for (const auto& e : error) {
      if (e) std::rethrow_exception(e);
    }
  }
  return std::accumulate(partial.begin(), partial.end(), 0.0);
}

double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double scale = inv;
  double value = 0.0;
  while (i > 0) {
    value += static_cast<double>(i % base) * scale;
    i /= base;
    scale *= inv;
  }
  return value;
}

void require_circle(const GeodesicCircle& c, const char* where) {
  if (!point_valid(c.center) || !(c.radius > 0.0) || !std::isfinite(c.radius)) {
    throw std::invalid_argument(std::string(where) + ": invalid circle");
  }
}

struct UpperResult {
  double value = 0.0;
  double amplitude = 0.0;
  int shape = -1;
  int points = 0;
};

UpperResult upper_bound_impl(const ConformalMetric& g, const MagneticField& sigma,
                             const PrimitiveFamily& family) {
  if (family.amplitude.empty()) {
    throw std::invalid_argument("primitive_upper_bound: empty amplitude grid");
  }
  if (family.samples < 16) {
    throw std::invalid_argument("primitive_upper_bound: need at least 16 samples");
  }
  if (family.translate_count < 0) {
    throw std::invalid_argument("primitive_upper_bound: negative translate count");
  }
  const SurfaceGroup& G = g.group();

  std::vector<RadialBump> shapes = family.shape;
  if (shapes.empty()) shapes.push_back(RadialBump{G.base, 1.0, 1.3});

  std::vector<Isometry> maps;
  maps.push_back(Isometry::identity());
  for (const Isometry& t : nearest_translates(G, static_cast<std::size_t>(family.translate_count))) {
    maps.push_back(t);
  }

  std::vector<Point> pts;
  pts.reserve(maps.size() * static_cast<std::size_t>(family.samples));
  for (int i = 0; i < family.samples; ++i) {
    const double phi = 2.0 * kPi * radical_inverse(static_cast<std::uint64_t>(i) + 1, 2);
    const double rho =
        octagon_boundary_distance(G, phi) * std::sqrt(radical_inverse(static_cast<std::uint64_t>(i) + 1, 3));
    const Point p = polar_point(G.base, phi, rho);
    for (const Isometry& m : maps) pts.push_back(apply(m, p));
  }

  // Per-point data independent of the correction: 1/2 e^{-2u} y^2 and the
  // covector of the bare primitive a y^{-1} dx + beta0.
  const std::size_t n = pts.size();
  std::vector<double> fac(n), bx(n), by(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = pts[i];
    const double e = std::exp(-2.0 * g.u().value(p));
    fac[i] = 0.5 * e * p.y * p.y;
    const Covector b = sigma.beta0().value(p);
    bx[i] = sigma.a() / p.y + b.cx;
    by[i] = b.cy;
  }

  auto sup_value = [&](const InvariantScalar* phi) {
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double cx = bx[i];
      double cy = by[i];
      if (phi != nullptr) {
        const ScalarJet j = phi->jet(pts[i]);
        cx += j.dx;
        cy += j.dy;
      }
      const double v = fac[i] * (cx * cx + cy * cy);
      if (v > best) best = v;
    }
    return best;
  };

  UpperResult best;
  best.value = std::numeric_limits<double>::infinity();
  best.points = static_cast<int>(n);
  bool bare_cached = false;
  double bare_value = 0.0;
  for (int si = 0; si < static_cast<int>(shapes.size()); ++si) {
    for (double amp : family.amplitude) {
      double value = 0.0;
      if (amp == 0.0) {
        if (!bare_cached) {
          bare_value = sup_value(nullptr);
          bare_cached = true;
        }
        value = bare_value;
      } else {
        const RadialBump& s = shapes[static_cast<std::size_t>(si)];
        const InvariantScalar phi(G, 0.0, {RadialBump{s.center, amp * s.amplitude, s.support}});
        value = sup_value(&phi);
      }
      if (value < best.value) {
        best.value = value;
        best.amplitude = amp;
        best.shape = (amp == 0.0) ? -1 : si;
      }
    }
  }
  return best;
}

}  // namespace

CurveSample circle_curve(const ConformalMetric& g, const GeodesicCircle& circle, double speed,
                         int segments) {
  require_circle(circle, "circle_curve");
  if (!(speed > 0.0)) throw std::invalid_argument("circle_curve: speed must be positive");
  if (segments < 8) throw std::invalid_argument("circle_curve: need at least 8 segments");

  const double len = circle_length(circle.radius);
  CurveSample curve;
  curve.node.reserve(static_cast<std::size_t>(segments) + 1);
  curve.time.reserve(static_cast<std::size_t>(segments) + 1);
  for (int j = 0; j <= segments; ++j) {
    curve.node.push_back(circle_point(circle, len * static_cast<double>(j) / segments));
  }
  curve.node.back() = curve.node.front();

  auto eu = [&g](const Point& p) { return g.conformal_factor(p) / p.y; };
  double t = 0.0;
  curve.time.push_back(0.0);
  for (int j = 0; j < segments; ++j) {
    const Point& p0 = curve.node[static_cast<std::size_t>(j)];
    const Point& p1 = curve.node[static_cast<std::size_t>(j) + 1];
    const Point mid{0.5 * (p0.x + p1.x), 0.5 * (p0.y + p1.y)};
    const double chord = std::hypot(p1.x - p0.x, p1.y - p0.y);
    const double glen = chord * (eu(p0) + 4.0 * eu(mid) + eu(p1)) / 6.0;
    t += glen / speed;
    curve.time.push_back(t);
  }
  return curve;
}

double action_value(const ConformalMetric& g, const MagneticField& sigma,
                    const CurveSample& curve, double k) {
  const std::size_t n = curve.node.size();
  if (n < 3 || curve.time.size() != n) {
    throw std::invalid_argument("action_value: need a closed polyline with matching times");
  }
  if (cosh_distance_m1(curve.node.front(), curve.node.back()) > 1e-16) {
    throw std::invalid_argument("action_value: curve is not closed");
  }
  const double a = sigma.a();
  auto lagrangian = [&](const Point& p, double vx, double vy) {
    const double eu = g.conformal_factor(p);
    const double kin = 0.5 * eu * eu * (vx * vx + vy * vy) / (p.y * p.y);
    const Covector b = sigma.beta0().value(p);
    const double theta = a * vx / p.y + b.cx * vx + b.cy * vy;
    return kin - theta + k;
  };
  double total = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const Point& p0 = curve.node[j];
    const Point& p1 = curve.node[j + 1];
    const double dt = curve.time[j + 1] - curve.time[j];
    if (!(dt > 0.0)) throw std::invalid_argument("action_value: degenerate segment");
    const double vx = (p1.x - p0.x) / dt;
    const double vy = (p1.y - p0.y) / dt;
    const Point mid{0.5 * (p0.x + p1.x), 0.5 * (p0.y + p1.y)};
    total += dt / 6.0 *
             (lagrangian(p0, vx, vy) + 4.0 * lagrangian(mid, vx, vy) + lagrangian(p1, vx, vy));
  }
  return total;
}

double circle_g_length(const ConformalMetric& g, const GeodesicCircle& circle) {
  require_circle(circle, "circle_g_length");
  if (g.constant_factor()) {
    return std::exp(g.u().constant_part()) * circle_length(circle.radius);
  }
  const std::int64_t n = circle_node_count(circle.radius);
  const double len = circle_length(circle.radius);
  const double dt = len / static_cast<double>(n);
  const InvariantScalar& u = g.u();
  const double sum = chunked_sum(n, [&](std::int64_t i) {
    const Point p = circle_point(circle, (static_cast<double>(i) + 0.5) * dt);
    return std::exp(u.value(p));
  });
  return sum * dt;
}

double circle_loop_integral(const InvariantOneForm& beta, const GeodesicCircle& circle) {
  require_circle(circle, "circle_loop_integral");
  if (beta.empty()) return 0.0;
  const std::int64_t n = circle_node_count(circle.radius);
  const double len = circle_length(circle.radius);
  const double dt = len / static_cast<double>(n);
  const double sum = chunked_sum(n, [&](std::int64_t i) {
    double vx = 0.0, vy = 0.0;
    const Point p = circle_point_velocity(circle, (static_cast<double>(i) + 0.5) * dt, &vx, &vy);
    const Covector b = beta.value(p);
    return b.cx * vx + b.cy * vy;
  });
  return sum * dt;
}

double circle_flux(const MagneticField& sigma, const GeodesicCircle& circle) {
  require_circle(circle, "circle_flux");
  return sigma.a() * disk_area(circle.radius) + circle_loop_integral(sigma.beta0(), circle);
}

double circle_lower_bound(const ConformalMetric& g, const MagneticField& sigma,
                          const std::vector<double>& r_grid,
                          const std::vector<Point>& center_grid) {
  if (r_grid.empty() || center_grid.empty()) {
    throw std::invalid_argument("circle_lower_bound: empty grid");
  }
  double best = 0.0;
  for (const Point& c : center_grid) {
    for (double r : r_grid) {
      const GeodesicCircle circle{c, r};
      const double ratio = std::fabs(circle_flux(sigma, circle)) / circle_g_length(g, circle);
      if (ratio > best) best = ratio;
    }
  }
  return 0.5 * best * best;
}

double primitive_upper_bound(const ConformalMetric& g, const MagneticField& sigma,
                             const PrimitiveFamily& family) {
  return upper_bound_impl(g, sigma, family).value;
}

std::vector<Point> default_center_grid(const SurfaceGroup& g) {
  std::vector<Point> centers = {g.base};
  for (int j = 0; j < 4; ++j) {
    centers.push_back(polar_point(g.base, (0.25 + 0.5 * j) * kPi, 0.7));
  }
  return centers;
}

CriticalEstimate estimate_critical_value(const ConformalMetric& g, const MagneticField& sigma,
                                         const CritBudget& budget) {
  if (budget.r_grid.empty()) throw std::invalid_argument("estimate_critical_value: empty r_grid");
  const std::vector<Point> centers =
      budget.center_grid.empty() ? default_center_grid(g.group()) : budget.center_grid;

  CriticalEstimate est;
  double best_ratio = -1.0;
  for (const Point& c : centers) {
    for (double r : budget.r_grid) {
      const GeodesicCircle circle{c, r};
      const double ratio = std::fabs(circle_flux(sigma, circle)) / circle_g_length(g, circle);
      if (ratio > best_ratio) {
        best_ratio = ratio;
        est.best_circle = circle;
      }
    }
  }
  est.lower = 0.5 * best_ratio * best_ratio;

  const UpperResult up = upper_bound_impl(g, sigma, budget.family);
  est.upper = up.value;
  est.best_amplitude = up.amplitude;
  est.best_shape = up.shape;
  est.sample_count = up.points;

  if (est.lower > est.upper + budget.sandwich_tol) {
    throw std::runtime_error("estimate_critical_value: bounds inverted (lower=" +
                             std::to_string(est.lower) + ", upper=" + std::to_string(est.upper) +
                             "); check orientation/primitive conventions");
  }
  return est;
}

ScInterval s_c_value(const CriticalEstimate& est) {
  if (est.lower < 0.0 || est.upper < 0.0) {
    throw std::invalid_argument("s_c_value: negative bound");
  }
  ScInterval out;
  const double inf = std::numeric_limits<double>::infinity();
  out.lo = est.upper > 0.0 ? 1.0 / std::sqrt(2.0 * est.upper) : inf;
  if (est.lower > 0.0) {
    out.hi = 1.0 / std::sqrt(2.0 * est.lower);
    out.bounded = true;
  } else {
    out.hi = inf;
    out.bounded = false;
  }
  return out;
}

TheoremGapReport theorem_gap_report(const ConformalMetric& g, const MagneticField& sigma,
                                    const CritBudget& budget, double tol) {
  const auto sh = s_h_value(g, sigma);
  if (!sh.has_value()) {
    throw std::invalid_argument("theorem_gap_report: total flux is zero");
  }
  TheoremGapReport rep;
  rep.estimate = estimate_critical_value(g, sigma, budget);
  rep.s_c = s_c_value(rep.estimate);
  rep.s_h = *sh;
  rep.rho_g = conformality_coefficient(g);
  const double flux = total_flux(sigma);
  // -4 pi chi = 8 pi for the genus-2 surface (chi = -2).
  rep.gk_rhs = flux * flux / (8.0 * kPi * g.area() * rep.rho_g * rep.rho_g);
  rep.gk_residual = rep.estimate.upper - rep.gk_rhs;
  rep.gap = rep.s_h - rep.s_c.hi;
  rep.u_constant = g.constant_factor();
  rep.beta_trivial = sigma.beta0().empty();
  if (!(rep.s_c.hi <= rep.s_h + tol)) {
    throw std::runtime_error(
        "theorem_gap_report: s_c upper end exceeds s_h (s_c_hi=" + std::to_string(rep.s_c.hi) +
        ", s_h=" + std::to_string(rep.s_h) + ", c_lower=" + std::to_string(rep.estimate.lower) +
        ", c_upper=" + std::to_string(rep.estimate.upper) + ")");
  }
  return rep;
}

PropositionReport proposition_check(const ConformalMetric& g, const MagneticField& sigma,
                                    const PrimitiveFamily& family, double slack) {
  PropositionReport rep;
  rep.c_upper = upper_bound_impl(g, sigma, family).value;
  rep.rho_g = conformality_coefficient(g);
  rep.twice_c = 2.0 * rep.c_upper;
  rep.twice_rho2_c = 2.0 * rep.rho_g * rep.rho_g * rep.c_upper;
  const double h = helicity_formula(g, sigma);
  rep.rhs = 1.0 - h / (2.0 * kPi * g.area());
  if (rep.twice_c + 1e-12 < rep.twice_rho2_c) {
    throw std::runtime_error("proposition_check: conformality coefficient above 1");
  }
  if (rep.twice_rho2_c + slack < rep.rhs) {
    throw std::runtime_error("proposition_check: chain violated (2 rho^2 c=" +
                             std::to_string(rep.twice_rho2_c) + ", rhs=" +
                             std::to_string(rep.rhs) + ")");
  }
  return rep;
}

RadonBoundReport radon_bound_check(const ConformalMetric& g, const MagneticField& sigma,
                                   double sqrt_2c, const std::vector<double>& r_grid,
                                   const std::vector<Point>& center_grid) {
  if (!g.constant_factor() || g.u().constant_part() != 0.0) {
    throw std::invalid_argument("radon_bound_check: needs the constant-curvature base metric");
  }
  if (!(sqrt_2c > 0.0)) throw std::invalid_argument("radon_bound_check: sqrt_2c must be positive");
  if (r_grid.empty() || center_grid.empty()) {
    throw std::invalid_argument("radon_bound_check: empty grid");
  }
  RadonBoundReport rep;
  rep.bound = 2.0 * kPi * sqrt_2c;
  for (const Point& c : center_grid) {
    for (double r : r_grid) {
      RadonBoundEntry e;
      e.center = c;
      e.radius = r;
      e.integral = circle_loop_integral(sigma.beta0(), GeodesicCircle{c, r});
      e.ratio_sharp = e.integral / (rep.bound * (1.0 - std::exp(-r)));
      rep.max_ratio = std::max(rep.max_ratio, std::fabs(e.integral) / rep.bound);
      rep.entry.push_back(e);
    }
  }
  return rep;
}

}  // namespace magflow
