#pragma once

// The pair (g, sigma): a conformal metric g = e^{2u} g0 over the genus-2
// hyperbolic base and a magnetic 2-form sigma = a mu0 + d(beta0).  Helicity,
// the conformality coefficient, the helicity-vanishing intensity s_h, and
// the contact-type primitive tau_s live here.
//
// Conventions (Euler characteristic chi = -2 throughout):
//   area form     mu_g = e^{2u} mu0
//   curvature     K = e^{-2u} (-1 - lap0 u),  lap0 = y^2 (d_xx + d_yy)
//   density       sigma = f mu_g,  f = e^{-2u} (a + h0),  d(beta0) = h0 mu0
//   total flux    [sigma] = 4 pi a
//   primitive     sigma = -a K mu_g + d(beta),  beta = beta0 - a * (star du),
//                 star du = u_x dy - u_y dx  (star dx = dy in the g0 coframe)

#include <optional>
#include <vector>

#include "magflow/halfplane.hpp"
#include "magflow/surface.hpp"

namespace magflow {

class ConformalMetric {
 public:
  ConformalMetric(const SurfaceGroup& g, InvariantScalar u, int quad_order = 40);

  const SurfaceGroup& group() const { return *group_; }
  const InvariantScalar& u() const { return u_; }
  int quadrature_order() const { return order_; }

  // True when u has no bumps, so the area and related integrals are exact.
  bool constant_factor() const { return u_.bumps().empty(); }

  double area() const { return area_; }
  double conformal_factor(const Point& p) const;  // e^{u(p)}
  double gauss_curvature(const Point& p) const;

  // Radial panel breaks for quadratures of u-dependent integrands.
  std::vector<double> radial_breaks() const { return u_.base_radial_breaks(); }

 private:
  const SurfaceGroup* group_;
  InvariantScalar u_;
  int order_;
  double area_ = 0.0;
};

class MagneticField {
 public:
  MagneticField(double a, InvariantOneForm beta0);

  double a() const { return a_; }
  const InvariantOneForm& beta0() const { return beta0_; }

  // sigma / mu_g at p.
  double f_density(const ConformalMetric& g, const Point& p) const;

  // h0 = d(beta0) / mu0 at p.
  double exact_density(const Point& p) const { return beta0_.density(p); }

 private:
  double a_;
  InvariantOneForm beta0_;
};

double metric_area(const ConformalMetric& g);

// rho_g = (1/A) int rho mu_g with rho = sqrt(A/4pi) e^{-u}; in (0, 1],
// equal to 1 exactly iff u is constant.
double conformality_coefficient(const ConformalMetric& g);

// [sigma] = -a 2 pi chi = 4 pi a; independent of beta0.
double total_flux(const MagneticField& sigma);

// H(F) = 2 pi A + [sigma]^2 / chi.
double helicity_formula(const ConformalMetric& g, const MagneticField& sigma);

// H(F) as the phase-space integral of tau(F) = 1 - a f - beta(v) against
// the Liouville volume (fundamental domain x fiber angle).  The beta term
// is integrated with symmetric angular nodes and vanishes to machine
// precision; it is kept so the integrand stays the full contact primitive,
// not a pre-simplified expression.
double helicity_integral(const ConformalMetric& g, const MagneticField& sigma,
                         int order = 44, int fiber_order = 16);

// s_h = sqrt(4 pi A) / |[sigma]|; empty when [sigma] = 0.
std::optional<double> s_h_value(const ConformalMetric& g, const MagneticField& sigma);

// beta = beta0 - a (u_x dy - u_y dx), the 1-form with sigma = -aK mu_g + d beta.
Covector relative_primitive(const ConformalMetric& g, const MagneticField& sigma,
                            const Point& p);

// tau_s(F_s) = 1 - a s^2 f(x) - s beta_x(v) at the unit-circle-bundle state
// (p, theta); theta is the Euclidean chart angle of the g-unit tangent.
double contact_primitive_value(const ConformalMetric& g, const MagneticField& sigma,
                               double s, const Point& p, double theta);

struct PrimitiveRange {
  double min_value = 0.0;
  double max_value = 0.0;
  bool sign_definite() const { return min_value > 0.0 || max_value < 0.0; }
};

// Min/max of tau_s(F_s) over a deterministic low-discrepancy sample of the
// fundamental domain times a uniform fiber grid.
PrimitiveRange contact_primitive_range(const ConformalMetric& g, const MagneticField& sigma,
                                       double s, int space_samples = 512,
                                       int fiber_samples = 32);

}  // namespace magflow
