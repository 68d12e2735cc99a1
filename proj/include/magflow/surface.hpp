#pragma once

// Genus-2 hyperbolic surface presented as H^2 / Gamma, where Gamma is the
// group generated by the side pairings of the regular octagon (vertex angle
// pi/4, all eight vertices identified, area 4 pi) centered at the base point.
// Opposite sides are identified by hyperbolic translations through the
// side midpoints; the octagon is the Dirichlet domain of the base point.

#include <array>
#include <cstddef>
#include <vector>

#include "magflow/halfplane.hpp"

namespace magflow {

struct SurfaceGroup {
  Point base{0.0, 1.0};
  double circumradius = 0.0;  // base -> vertex, arccosh(3 + 2 sqrt(2))
  double inradius = 0.0;      // base -> side midpoint, arccosh(1 + sqrt(2))
  std::array<Point, 8> vertex{};    // vertex k at polar angle pi(2k-1)/8
  std::array<Isometry, 8> gen{};    // gen[k] crosses side k; gen[(k+4)%8] == gen[k]^-1
  std::array<int, 8> relator{};     // indices whose left-to-right product is +-identity
  double relator_residual = 0.0;

  double diameter() const { return 2.0 * circumradius; }
};

// Builds the octagon group; aborts (throws std::runtime_error) if the vertex
// relator does not close or the polygon area quadrature misses 4 pi.
SurfaceGroup build_genus2_group();

// Distance from the base point to the octagon boundary in chart direction phi.
double octagon_boundary_distance(const SurfaceGroup& g, double phi);

// Closed-domain membership: no generator moves p strictly closer to the base.
bool in_fundamental_domain(const SurfaceGroup& g, const Point& p, double tol = 1e-12);

struct GroupBall {
  double radius = 0.0;
  std::vector<Isometry> element;  // identity first, then sorted by displacement
};

// All group elements whose base-point displacement is at most `radius`.
// Breadth-first search over words, pruning prefixes whose displacement
// exceeds radius + circumradius + 0.25 (every element in the ball is
// reachable through copies touching the geodesic to its translate, so the
// margin of one circumradius keeps the search complete).
GroupBall enumerate_group_ball(const SurfaceGroup& g, double radius,
                               std::size_t cap = 1000000);

struct ReducedPoint {
  Point point;                        // in the closed fundamental domain
  Isometry word = Isometry::identity();  // apply(word, point) == original input
};

// Greedy descent on the distance to the base point over the generator set.
ReducedPoint reduce_point(const SurfaceGroup& g, const Point& p);

// Integral of f against the hyperbolic area form over the fundamental octagon
// (polar chart around the base; tensor Gauss-Legendre per boundary sector).
// `radial_breaks` splits the radial panels at known kink radii.
double domain_quadrature(const SurfaceGroup& g, const ScalarField& f, int order,
                         const std::vector<double>& radial_breaks = {});

// The `count` non-identity elements of smallest base displacement.
std::vector<Isometry> nearest_translates(const SurfaceGroup& g, std::size_t count);

// Smallest displacement the group gives to p (twice the injectivity radius
// of the quotient at p).  `search` bounds the displacement scan.
double min_displacement(const SurfaceGroup& g, const Point& p, double search);

// ---------------------------------------------------------------------------
// Gamma-invariant fields as finite sums of bump translates.
//
// Profile in m = cosh(rho) - 1 (an exact rational function of the chart):
//   scalar bump   amp * (1 - m/m_R)^4            for rho <= R, else 0
//   one-form bump amp * m (1 - m/m_R)^4 * dphi   (dphi of the polar chart
//                                                 around the bump center)
// Supports stay below the injectivity radius at the center, so on each
// translate at most the nearest copy of a given bump is active and the
// invariant sum is finite and exact.

struct RadialBump {
  Point center{0.0, 1.0};
  double amplitude = 0.0;
  double support = 1.0;  // hyperbolic support radius
};

struct ScalarJet {
  double value = 0.0;
  double dx = 0.0;
  double dy = 0.0;
  double lap = 0.0;  // euclidean laplacian (chart); multiply by y^2 for g0
};

class InvariantScalar {
 public:
  InvariantScalar(const SurfaceGroup& g, double constant, std::vector<RadialBump> bumps);

  double value(const Point& p) const;
  ScalarJet jet(const Point& p) const;

  double constant_part() const { return constant_; }
  const std::vector<RadialBump>& bumps() const { return bumps_; }
  const SurfaceGroup& group() const { return *group_; }

  // Exact integral against mu0 over the surface (area 4 pi).
  double integral() const;

  // Support radii of bumps centered at the base point (radial quadrature breaks).
  std::vector<double> base_radial_breaks() const;

 private:
  const SurfaceGroup* group_;
  double constant_ = 0.0;
  std::vector<RadialBump> bumps_;
  std::vector<std::vector<Point>> sites_;  // per bump: translate centers near the domain
  std::vector<double> m_support_;          // cosh(support) - 1 per bump

  friend class InvariantOneForm;
};

class InvariantOneForm {
 public:
  InvariantOneForm(const SurfaceGroup& g, std::vector<RadialBump> bumps);

  Covector value(const Point& p) const;

  // Density of the exterior derivative against mu0: an invariant scalar,
  // amp (1 - m/m_R)^3 (1 - 5 m/m_R) per bump; integrates to zero.
  double density(const Point& p) const;

  const std::vector<RadialBump>& bumps() const { return bumps_; }
  const SurfaceGroup& group() const { return *group_; }
  bool empty() const { return bumps_.empty(); }

  std::vector<double> base_radial_breaks() const;

 private:
  const SurfaceGroup* group_;
  std::vector<RadialBump> bumps_;
  std::vector<std::vector<Point>> sites_;
  std::vector<double> m_support_;
};

}  // namespace magflow
