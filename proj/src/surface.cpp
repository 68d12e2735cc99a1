#include "magflow/surface.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace magflow {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kFourPi = 4.0 * kPi;

double frobenius_gap(const Isometry& m, double sign) {
  return std::max({std::fabs(m.a - sign), std::fabs(m.b), std::fabs(m.c),
                   std::fabs(m.d - sign)});
}

bool is_identity(const Isometry& m, double tol) {
  return frobenius_gap(m, 1.0) < tol || frobenius_gap(m, -1.0) < tol;
}

// Sign-canonical form: first entry of magnitude > 1e-9 made positive
// (the matrices act projectively, so +-M are the same element).
Isometry canonical_sign(const Isometry& m) {
  const double lead = (std::fabs(m.a) > 1e-9)   ? m.a
                      : (std::fabs(m.b) > 1e-9) ? m.b
                      : (std::fabs(m.c) > 1e-9) ? m.c
                                                : m.d;
  if (lead < 0.0) return Isometry{-m.a, -m.b, -m.c, -m.d};
  return m;
}

struct MatrixKey {
  std::int64_t v[4];
  bool operator==(const MatrixKey& o) const {
    return v[0] == o.v[0] && v[1] == o.v[1] && v[2] == o.v[2] && v[3] == o.v[3];
  }
};

struct MatrixKeyHash {
  std::size_t operator()(const MatrixKey& k) const {
    std::uint64_t h = 1469598103934665603ull;
    for (int i = 0; i < 4; ++i) {
      h ^= static_cast<std::uint64_t>(k.v[i]);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

MatrixKey quantize(const Isometry& m) {
  const Isometry c = canonical_sign(m);
  const double h = 1e-5;
  return MatrixKey{{static_cast<std::int64_t>(std::llround(c.a / h)),
                    static_cast<std::int64_t>(std::llround(c.b / h)),
                    static_cast<std::int64_t>(std::llround(c.c / h)),
                    static_cast<std::int64_t>(std::llround(c.d / h))}};
}

}  // namespace

SurfaceGroup build_genus2_group() {
  SurfaceGroup g;
  g.base = Point{0.0, 1.0};
  // Regular octagon with vertex angle pi/4: right-triangle relations give
  // cosh(circumradius) = cot^2(pi/8) and cosh(inradius) = cot(pi/8) = 1+sqrt(2).
  const double cot8 = 1.0 + std::sqrt(2.0);
  g.circumradius = std::acosh(cot8 * cot8);
  g.inradius = std::acosh(cot8);

  for (int k = 0; k < 8; ++k) {
    g.vertex[k] = polar_point(g.base, kPi * (2 * k - 1) / 8.0, g.circumradius);
    // Translation by twice the inradius along the axis through side k's midpoint.
    const Isometry rot = Isometry::rotation_about_i(kPi * k / 4.0);
    g.gen[k] = compose(rot, compose(Isometry::vertical_translation(2.0 * g.inradius),
                                    rot.inverse()));
  }

  // Construction invariants: opposite generators are mutual inverses and each
  // pairing carries the endpoints of side k+4 onto the endpoints of side k.
  for (int k = 0; k < 8; ++k) {
    if (frobenius_gap(compose(g.gen[k], g.gen[(k + 4) % 8]), 1.0) > 1e-12 &&
        frobenius_gap(compose(g.gen[k], g.gen[(k + 4) % 8]), -1.0) > 1e-12) {
      throw std::runtime_error("build_genus2_group: opposite pairings are not inverse");
    }
    for (int e = 0; e < 2; ++e) {
      const Point v = apply(g.gen[k], g.vertex[(k + 4 + e) % 8]);
      const double d0 = hyp_distance(v, g.vertex[k]);
      const double d1 = hyp_distance(v, g.vertex[(k + 1) % 8]);
      if (std::min(d0, d1) > 1e-9) {
        throw std::runtime_error("build_genus2_group: side pairing misses the paired side");
      }
    }
  }

  // Vertex relator by walking the corner cycle: start in the base copy at
  // vertex 0, cross side 0, then keep crossing the other side at the shared
  // corner until the walk returns to the base copy.
  {
    const Point v0 = g.vertex[0];
    Isometry w = g.gen[0];
    g.relator[0] = 0;
    int shared = 4;  // side of the current copy glued to the previous one
    int len = 1;
    while (len < 12) {
      if (is_identity(w, 1e-8)) break;
      const Point x = apply(w.inverse(), v0);
      int j = -1;
      double best = 1e9;
      for (int i = 0; i < 8; ++i) {
        const double d = hyp_distance(x, g.vertex[i]);
        if (d < best) {
          best = d;
          j = i;
        }
      }
      if (best > 1e-6) {
        throw std::runtime_error("build_genus2_group: relator walk lost the corner (gap " +
                                 std::to_string(best) + ")");
      }
      const int s0 = (j + 7) % 8;  // sides meeting at vertex j
      const int s1 = j;
      if (s0 != shared && s1 != shared) {
        throw std::runtime_error("build_genus2_group: corner walk left the shared side");
      }
      const int cross = (s0 == shared) ? s1 : s0;
      if (len >= 8) {
        throw std::runtime_error("build_genus2_group: relator walk failed to close");
      }
      g.relator[len++] = cross;
      w = compose(w, g.gen[cross]);
      shared = (cross + 4) % 8;
    }
    if (len != 8 || !is_identity(w, 1e-8)) {
      throw std::runtime_error("build_genus2_group: vertex relator did not close after 8 sides");
    }
    g.relator_residual = std::min(frobenius_gap(w, 1.0), frobenius_gap(w, -1.0));
    if (g.relator_residual > 1e-8) {
      throw std::runtime_error("build_genus2_group: relator residual " +
                               std::to_string(g.relator_residual));
    }
  }

  // Gauss-Bonnet cross-check on the construction: polygon area must be 4 pi.
  const double area =
      domain_quadrature(g, [](const Point&) { return 1.0; }, 32);
  if (std::fabs(area - kFourPi) > 1e-6) {
    throw std::runtime_error("build_genus2_group: octagon area off by " +
                             std::to_string(area - kFourPi));
  }
  return g;
}

double octagon_boundary_distance(const SurfaceGroup& g, double phi) {
  // Fold into the sector around the nearest side midpoint (angles k pi/4).
  double psi = std::remainder(phi, kPi / 4.0);
  const double t = std::tanh(g.inradius) / std::cos(psi);
  return std::atanh(t);
}

bool in_fundamental_domain(const SurfaceGroup& g, const Point& p, double tol) {
  const double m0 = cosh_distance_m1(p, g.base);
  for (int k = 0; k < 8; ++k) {
    if (cosh_distance_m1(apply(g.gen[k], p), g.base) < m0 - tol) return false;
  }
  return true;
}

GroupBall enumerate_group_ball(const SurfaceGroup& g, double radius, std::size_t cap) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("enumerate_group_ball: bad radius");
  }
  const double prune = radius + g.circumradius + 0.25;

  struct Entry {
    Isometry m;
    double disp;
  };
  std::deque<Entry> frontier;
  std::unordered_set<MatrixKey, MatrixKeyHash> seen;
  std::vector<Entry> found;

  frontier.push_back({Isometry::identity(), 0.0});
  seen.insert(quantize(Isometry::identity()));

  while (!frontier.empty()) {
    const Entry cur = frontier.front();
    frontier.pop_front();
    if (cur.disp <= radius + 1e-9) found.push_back(cur);
    for (int k = 0; k < 8; ++k) {
      const Isometry next = compose(cur.m, g.gen[k]);
      const double disp = hyp_distance(g.base, apply(next, g.base));
      if (disp > prune) continue;
      if (!seen.insert(quantize(next)).second) continue;
      if (seen.size() > 4 * cap) {
        throw std::runtime_error("enumerate_group_ball: search exceeded cap " +
                                 std::to_string(cap) + " at radius " + std::to_string(radius));
      }
      frontier.push_back({next, disp});
    }
  }

  std::sort(found.begin(), found.end(), [](const Entry& l, const Entry& r) {
    if (l.disp != r.disp) return l.disp < r.disp;
    const Isometry a = canonical_sign(l.m), b = canonical_sign(r.m);
    if (a.a != b.a) return a.a < b.a;
    if (a.b != b.b) return a.b < b.b;
    if (a.c != b.c) return a.c < b.c;
    return a.d < b.d;
  });

  // Merge pass: quantization can in principle double-report an element whose
  // entries straddle a grid boundary; duplicates are adjacent after sorting.
  GroupBall ball;
  ball.radius = radius;
  for (const Entry& e : found) {
    bool dup = false;
    const Isometry ce = canonical_sign(e.m);
    for (std::size_t j = ball.element.size(); j-- > 0;) {
      const Isometry cb = canonical_sign(ball.element[j]);
      const double scale = std::max(1.0, std::fabs(ce.a) + std::fabs(ce.b) +
                                             std::fabs(ce.c) + std::fabs(ce.d));
      if (std::fabs(ce.a - cb.a) < 1e-6 * scale && std::fabs(ce.b - cb.b) < 1e-6 * scale &&
          std::fabs(ce.c - cb.c) < 1e-6 * scale && std::fabs(ce.d - cb.d) < 1e-6 * scale) {
        dup = true;
        break;
      }
      if (j + 8 < ball.element.size()) break;
    }
    if (!dup) {
      if (ball.element.size() >= cap) {
        throw std::runtime_error("enumerate_group_ball: ball exceeds element cap " +
                                 std::to_string(cap) + " at radius " + std::to_string(radius));
      }
      ball.element.push_back(e.m);
    }
  }
  return ball;
}

ReducedPoint reduce_point(const SurfaceGroup& g, const Point& p) {
  if (!point_valid(p)) {
    throw std::invalid_argument("reduce_point: point outside the upper half-plane");
  }
  ReducedPoint out;
  out.point = p;
  Isometry acc = Isometry::identity();
  double m_cur = cosh_distance_m1(out.point, g.base);
  for (int iter = 0; iter < 100000; ++iter) {
    int best = -1;
    double m_best = m_cur;
    Point p_best{};
    for (int k = 0; k < 8; ++k) {
      const Point q = apply(g.gen[k], out.point);
      const double m = cosh_distance_m1(q, g.base);
      if (m < m_best - 1e-15 * (1.0 + m_best)) {
        m_best = m;
        best = k;
        p_best = q;
      }
    }
    if (best < 0) {
      out.word = acc.inverse();
      return out;
    }
    out.point = p_best;
    m_cur = m_best;
    acc = compose(g.gen[best], acc);
  }
  throw std::runtime_error("reduce_point: descent failed to terminate");
}

double domain_quadrature(const SurfaceGroup& g, const ScalarField& f, int order,
                         const std::vector<double>& radial_breaks) {
  if (order < 2) throw std::invalid_argument("domain_quadrature: order must be >= 2");
  const GaussLegendre gl(order);
  double total = 0.0;
  for (int sector = 0; sector < 8; ++sector) {
    const double mid_angle = kPi * sector / 4.0;
    for (int i = 0; i < order; ++i) {
      const double psi = mid_angle + (kPi / 8.0) * gl.node[i];
      const double w_psi = (kPi / 8.0) * gl.weight[i];
      const double rho_max = octagon_boundary_distance(g, psi);

      std::vector<double> edges{0.0};
      for (double b : radial_breaks) {
        if (b > 1e-14 && b < rho_max - 1e-14) edges.push_back(b);
      }
      edges.push_back(rho_max);
      std::sort(edges.begin(), edges.end());

      for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
        const double mid = 0.5 * (edges[e] + edges[e + 1]);
        const double hw = 0.5 * (edges[e + 1] - edges[e]);
        for (int j = 0; j < order; ++j) {
          const double rho = mid + hw * gl.node[j];
          const Point p = polar_point(g.base, psi, rho);
          const double v = f(p);
          if (!std::isfinite(v)) {
            throw std::runtime_error("domain_quadrature: integrand not finite at node (x=" +
                                     std::to_string(p.x) + ", y=" + std::to_string(p.y) + ")");
          }
          total += v * w_psi * hw * gl.weight[j] * std::sinh(rho);
        }
      }
    }
  }
  return total;
}

std::vector<Isometry> nearest_translates(const SurfaceGroup& g, std::size_t count) {
  const GroupBall ball = enumerate_group_ball(g, g.diameter() + 1.3);
  if (ball.element.size() < count + 1) {
    throw std::runtime_error("nearest_translates: ball too small for request");
  }
  // element[0] is the identity; the rest are displacement-sorted.
  return std::vector<Isometry>(ball.element.begin() + 1, ball.element.begin() + 1 + count);
}

double min_displacement(const SurfaceGroup& g, const Point& p, double search) {
  const double reach = search + 2.0 * hyp_distance(g.base, p) + 0.2;
  const GroupBall ball = enumerate_group_ball(g, reach);
  double best = search;
  for (std::size_t i = 1; i < ball.element.size(); ++i) {
    best = std::min(best, hyp_distance(p, apply(ball.element[i], p)));
  }
  return best;
}

// ---------------------------------------------------------------------------
// Invariant bump fields

namespace {

void validate_bump(const SurfaceGroup& g, const RadialBump& b, const char* who) {
  if (!point_valid(b.center)) {
    throw std::invalid_argument(std::string(who) + ": bump center invalid");
  }
  if (!in_fundamental_domain(g, b.center, 1e-9)) {
    throw std::invalid_argument(std::string(who) + ": bump center outside the fundamental domain");
  }
  if (!(b.support > 0.0) || !std::isfinite(b.support)) {
    throw std::invalid_argument(std::string(who) + ": bump support must be positive");
  }
  if (!std::isfinite(b.amplitude)) {
    throw std::invalid_argument(std::string(who) + ": bump amplitude not finite");
  }
  const double md =
      min_displacement(g, b.center, 2.0 * b.support + 0.6);
  if (!(b.support < 0.5 * md)) {
    throw std::invalid_argument(std::string(who) + ": bump support " +
                                std::to_string(b.support) +
                                " reaches the injectivity radius " + std::to_string(0.5 * md) +
                                " at its center");
  }
}

std::vector<Point> bump_sites(const SurfaceGroup& g, const RadialBump& b) {
  const double dc = hyp_distance(g.base, b.center);
  const double keep = g.circumradius + b.support + 1e-6;
  const GroupBall ball = enumerate_group_ball(g, keep + dc + 0.3);
  std::vector<Point> sites;
  for (const Isometry& m : ball.element) {
    const Point s = apply(m, b.center);
    if (hyp_distance(s, g.base) <= keep) sites.push_back(s);
  }
  return sites;
}

// Derivatives of m(p) = cosh(d(p, s)) - 1 in the chart at p.
struct MJet {
  double m, mx, my, lap;  // lap = m_xx + m_yy = 2(1 + m)/y^2
};

MJet m_jet(const Point& p, const Point& s) {
  MJet j;
  j.m = cosh_distance_m1(p, s);
  j.mx = (p.x - s.x) / (p.y * s.y);
  j.my = (p.y - s.y) / (p.y * s.y) - j.m / p.y;
  j.lap = 2.0 * (1.0 + j.m) / (p.y * p.y);
  return j;
}

}  // namespace

InvariantScalar::InvariantScalar(const SurfaceGroup& g, double constant,
                                 std::vector<RadialBump> bumps)
    : group_(&g), constant_(constant), bumps_(std::move(bumps)) {
  if (!std::isfinite(constant_)) {
    throw std::invalid_argument("InvariantScalar: constant not finite");
  }
  for (const RadialBump& b : bumps_) {
    validate_bump(g, b, "InvariantScalar");
    sites_.push_back(bump_sites(g, b));
    m_support_.push_back(std::cosh(b.support) - 1.0);
  }
}

double InvariantScalar::value(const Point& p) const {
  if (bumps_.empty()) return constant_;
  const ReducedPoint rp = reduce_point(*group_, p);
  double v = constant_;
  for (std::size_t i = 0; i < bumps_.size(); ++i) {
    const double m_r = m_support_[i];
    for (const Point& s0 : sites_[i]) {
      const Point s = apply(rp.word, s0);
      const double m = cosh_distance_m1(p, s);
      if (m >= m_r) continue;
      const double z = 1.0 - m / m_r;
      v += bumps_[i].amplitude * z * z * z * z;
    }
  }
  return v;
}

ScalarJet InvariantScalar::jet(const Point& p) const {
  ScalarJet out;
  out.value = constant_;
  if (bumps_.empty()) return out;
  const ReducedPoint rp = reduce_point(*group_, p);
  for (std::size_t i = 0; i < bumps_.size(); ++i) {
    const double m_r = m_support_[i];
    const double amp = bumps_[i].amplitude;
    for (const Point& s0 : sites_[i]) {
      const Point s = apply(rp.word, s0);
      const MJet mj = m_jet(p, s);
      if (mj.m >= m_r) continue;
      const double z = 1.0 - mj.m / m_r;
      const double z2 = z * z;
      const double pv = z2 * z2;
      const double p1 = -4.0 * z2 * z / m_r;
      const double p2 = 12.0 * z2 / (m_r * m_r);
      out.value += amp * pv;
      out.dx += amp * p1 * mj.mx;
      out.dy += amp * p1 * mj.my;
      out.lap += amp * (p2 * (mj.mx * mj.mx + mj.my * mj.my) + p1 * mj.lap);
    }
  }
  return out;
}

double InvariantScalar::integral() const {
  // Each bump embeds, so its mass is the closed form
  //   2 pi amp * int_0^{m_R} (1 - m/m_R)^4 dm = 2 pi amp m_R / 5
  // (the area form in m is exactly dm dphi).
  double total = constant_ * kFourPi;
  for (std::size_t i = 0; i < bumps_.size(); ++i) {
    total += 2.0 * kPi * bumps_[i].amplitude * m_support_[i] / 5.0;
  }
  return total;
}

std::vector<double> InvariantScalar::base_radial_breaks() const {
  std::vector<double> breaks;
  for (const RadialBump& b : bumps_) {
    if (hyp_distance(b.center, group_->base) < 1e-12) breaks.push_back(b.support);
  }
  return breaks;
}

InvariantOneForm::InvariantOneForm(const SurfaceGroup& g, std::vector<RadialBump> bumps)
    : group_(&g), bumps_(std::move(bumps)) {
  for (const RadialBump& b : bumps_) {
    validate_bump(g, b, "InvariantOneForm");
    sites_.push_back(bump_sites(g, b));
    m_support_.push_back(std::cosh(b.support) - 1.0);
  }
}

Covector InvariantOneForm::value(const Point& p) const {
  Covector out;
  if (bumps_.empty()) return out;
  const ReducedPoint rp = reduce_point(*group_, p);
  for (std::size_t i = 0; i < bumps_.size(); ++i) {
    const double m_r = m_support_[i];
    for (const Point& s0 : sites_[i]) {
      const Point s = apply(rp.word, s0);
      const double m = cosh_distance_m1(p, s);
      if (m >= m_r || m < 1e-30) continue;
      const double z = 1.0 - m / m_r;
      const double amp_a = bumps_[i].amplitude * m * z * z * z * z;
      // dphi of the polar chart around s:  dphi = Im( 2i dz / ((zeta-i)(zeta+i) y_s) )
      // with zeta = ((x - s.x) + i y)/s.y.
      const std::complex<double> zeta((p.x - s.x) / s.y, p.y / s.y);
      const std::complex<double> ii(0.0, 1.0);
      const std::complex<double> coef = 2.0 * ii / ((zeta - ii) * (zeta + ii) * s.y);
      out.cx += amp_a * coef.imag();
      out.cy += amp_a * coef.real();
    }
  }
  return out;
}

double InvariantOneForm::density(const Point& p) const {
  if (bumps_.empty()) return 0.0;
  const ReducedPoint rp = reduce_point(*group_, p);
  double v = 0.0;
  for (std::size_t i = 0; i < bumps_.size(); ++i) {
    const double m_r = m_support_[i];
    for (const Point& s0 : sites_[i]) {
      const double m = cosh_distance_m1(rp.point, s0);
      if (m >= m_r) continue;
      const double z = 1.0 - m / m_r;
      v += bumps_[i].amplitude * z * z * z * (1.0 - 5.0 * m / m_r);
    }
  }
  return v;
}

std::vector<double> InvariantOneForm::base_radial_breaks() const {
  std::vector<double> breaks;
  for (const RadialBump& b : bumps_) {
    if (hyp_distance(b.center, group_->base) < 1e-12) breaks.push_back(b.support);
  }
  return breaks;
}

}  // namespace magflow
