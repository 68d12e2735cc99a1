#pragma once

// Upper half-plane model of the hyperbolic plane.
//
// Points are (x, y) with y > 0, metric g0 = (dx^2 + dy^2) / y^2 (curvature -1).
// Orientation-preserving isometries are real 2x2 unit-determinant matrices
// acting by Moebius maps z -> (a z + b) / (c z + d).

#include <functional>
#include <vector>

namespace magflow {

struct Point {
  double x = 0.0;
  double y = 1.0;
};

bool point_valid(const Point& p);

// m = cosh(d(p,q)) - 1, an exact rational expression in chart coordinates.
// Preferred building block: no cancellation for nearby points.
double cosh_distance_m1(const Point& p, const Point& q);

double hyp_distance(const Point& p, const Point& q);

struct Isometry {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  static Isometry identity();
  // z -> e^t z, translation by t along the vertical geodesic through i.
  static Isometry vertical_translation(double t);
  // Rotation about i by angle phi (tangent vectors turn counterclockwise).
  static Isometry rotation_about_i(double phi);
  // z -> y_p z + x_p, the translate+scale map taking i to p.
  static Isometry i_to_point(const Point& p);
  static Isometry point_to_i(const Point& p);

  Isometry inverse() const;
  double det() const;
};

Isometry compose(const Isometry& m1, const Isometry& m2);  // m1 after m2
Point apply(const Isometry& m, const Point& p);
// arg of the conformal derivative of m at p: tangent angles shift by this.
double angle_shift(const Isometry& m, const Point& p);

struct GeodesicCircle {
  Point center;
  double radius = 1.0;  // hyperbolic radius, > 0
};

double circle_length(double r);  // 2 pi sinh r
double disk_area(double r);      // 2 pi (cosh r - 1)

// Geodesic polar chart about `center`: phi = 0 points along the upward
// vertical geodesic, phi increases counterclockwise, rho is hyperbolic
// distance.  polar_point(c, phi, 0) == c.
Point polar_point(const Point& center, double phi, double rho);

struct PolarCoord {
  double rho = 0.0;
  double phi = 0.0;
};
PolarCoord polar_coordinates(const Point& center, const Point& p);

// Point of the circle at g0-arclength t from the top point (the point at
// distance r directly above the center), counterclockwise.
Point circle_point(const GeodesicCircle& c, double t);
// Same, also reporting the chart velocity (dx/dt, dy/dt); |v|_g0 == 1.
Point circle_point_velocity(const GeodesicCircle& c, double t, double* vx, double* vy);

// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  std::vector<double> node;
  std::vector<double> weight;
  explicit GaussLegendre(int n);
};

using ScalarField = std::function<double(const Point&)>;

struct Covector {
  double cx = 0.0;  // dx coefficient
  double cy = 0.0;  // dy coefficient
};
using OneFormField = std::function<Covector(const Point&)>;

// Integral of f against the hyperbolic area form over the geodesic disk,
// via the polar chart (tensor-product Gauss-Legendre in rho and phi).
// `radial_breaks` optionally splits the rho panels at known kink radii.
double disk_quadrature(const GeodesicCircle& c, const ScalarField& f, int order,
                       const std::vector<double>& radial_breaks = {});

// Line integral of the 1-form over the circle, positively oriented
// (counterclockwise).  Reversing orientation negates the value.
double circle_quadrature(const GeodesicCircle& c, const OneFormField& beta, int order);

}  // namespace magflow
