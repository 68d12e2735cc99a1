#pragma once

// Two-sided estimation of the Mane critical value
//
//   c(g, sigma) = inf_theta sup_x (1/2) |theta_x|_g^2,
//
// the infimum over primitives theta of the lifted magnetic form on H^2.
//
// Lower bounds come from closed-curve actions: at k = c every closed curve
// has A_{L+k} >= 0, and on a base-metric circle C_r traversed at the
// optimal constant speed this reads  sqrt(2c) len_g(C_r) >= flux(D_r),  so
// c >= flux^2 / (2 len^2).  Upper bounds evaluate sup (1/2)|theta|_g^2 on a
// dense deterministic sample for the family theta = a y^{-1} dx + beta0 +
// d(phi), phi an invariant bump scalar.
//
// Intensity scale: s_c = 1 / sqrt(2 c), reported as an interval from the
// two bounds.

#include <vector>

#include "magflow/field.hpp"
#include "magflow/halfplane.hpp"
#include "magflow/surface.hpp"

namespace magflow {

// Closed polyline with node times.  Segments are linear in the chart with
// the constant chart velocity (dp / dt); the action integrand is evaluated
// by Simpson's rule on each segment.
struct CurveSample {
  std::vector<Point> node;   // node.front() == node.back()
  std::vector<double> time;  // strictly increasing, one per node
};

// Polyline approximation of the circle, parametrized at constant g-speed.
CurveSample circle_curve(const ConformalMetric& g, const GeodesicCircle& circle,
                         double speed, int segments);

// A_{L+k} = int (1/2 |gamma'|_g^2 - theta(gamma') + k) dt with theta the
// global primitive a y^{-1} dx + beta0.
double action_value(const ConformalMetric& g, const MagneticField& sigma,
                    const CurveSample& curve, double k);

// int_{C} e^u d(g0-arclength); exact when u is constant.
double circle_g_length(const ConformalMetric& g, const GeodesicCircle& circle);

// Loop integral of an invariant one-form along the circle (counterclockwise),
// i.e. the flux of its exterior derivative through the disk.
double circle_loop_integral(const InvariantOneForm& beta, const GeodesicCircle& circle);

// Flux of sigma through the disk: a * disk_area(r) + loop integral of beta0.
double circle_flux(const MagneticField& sigma, const GeodesicCircle& circle);

// (1/2) max^2 over the grid and both orientations of flux / g-length.
double circle_lower_bound(const ConformalMetric& g, const MagneticField& sigma,
                          const std::vector<double>& r_grid,
                          const std::vector<Point>& center_grid);

// Correction family for the upper bound: d(phi) with phi = amplitude *
// (unit bump shape).  An empty shape list means one bump at the group base
// with support 1.3.  The sup is taken over `samples` low-discrepancy points
// of the fundamental domain together with their images under the
// `translate_count` nearest deck transformations.
struct PrimitiveFamily {
  std::vector<double> amplitude = {-0.2, -0.1, 0.0, 0.1, 0.2};
  std::vector<RadialBump> shape;
  int samples = 4096;
  int translate_count = 16;
};

double primitive_upper_bound(const ConformalMetric& g, const MagneticField& sigma,
                             const PrimitiveFamily& family = {});

struct CriticalEstimate {
  double lower = 0.0;  // certified up to quadrature error
  double upper = 0.0;  // certified up to sampling density
  GeodesicCircle best_circle;   // maximizer of the circle ratio
  double best_amplitude = 0.0;  // minimizing correction amplitude
  int best_shape = -1;          // index into the family shapes; -1 = bare theta
  int sample_count = 0;         // evaluation points behind the sup
};

// Default circle radii 0.25 * 2^k up to 8 (the ratio saturates by r = 8)
// and, when center_grid is empty, five spread points of the octagon.
struct CritBudget {
  std::vector<double> r_grid = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
  std::vector<Point> center_grid;
  PrimitiveFamily family;
  double sandwich_tol = 1e-6;
};

std::vector<Point> default_center_grid(const SurfaceGroup& g);

// Runs both bounds; throws if they invert beyond sandwich_tol, which would
// signal an orientation or primitive convention bug.
CriticalEstimate estimate_critical_value(const ConformalMetric& g, const MagneticField& sigma,
                                         const CritBudget& budget = {});

struct ScInterval {
  double lo = 0.0;     // 1 / sqrt(2 upper)
  double hi = 0.0;     // 1 / sqrt(2 lower); +inf when lower == 0
  bool bounded = true; // false when the lower bound on c vanishes
};

ScInterval s_c_value(const CriticalEstimate& est);

// s_c <= s_h check (with equality only for constant u and beta0 = 0), plus
// the curvature inequality c >= [sigma]^2 / (-4 pi chi A rho_g^2).
struct TheoremGapReport {
  CriticalEstimate estimate;
  ScInterval s_c;
  double s_h = 0.0;
  double rho_g = 1.0;
  double gk_rhs = 0.0;       // [sigma]^2 / (-4 pi chi A rho_g^2)
  double gk_residual = 0.0;  // upper - gk_rhs
  double gap = 0.0;          // s_h - s_c.hi
  bool u_constant = true;
  bool beta_trivial = true;
};

// Requires [sigma] != 0; throws std::runtime_error if s_c.hi > s_h + tol.
TheoremGapReport theorem_gap_report(const ConformalMetric& g, const MagneticField& sigma,
                                    const CritBudget& budget = {}, double tol = 1e-3);

// Chain 2 c >= 2 rho_g^2 c >= 1 - H / (2 pi A), checked at c = upper bound
// (the true c can only make the left side smaller than the computed one).
struct PropositionReport {
  double c_upper = 0.0;
  double rho_g = 1.0;
  double twice_c = 0.0;
  double twice_rho2_c = 0.0;
  double rhs = 0.0;  // 1 - H / (2 pi A)
};

PropositionReport proposition_check(const ConformalMetric& g, const MagneticField& sigma,
                                    const PrimitiveFamily& family = {}, double slack = 1e-6);

// On the constant-curvature base metric, loop integrals of beta0 over
// base circles against the bound 2 pi sqrt(2c) (1 - e^{-r}).  Report only.
struct RadonBoundEntry {
  Point center;
  double radius = 0.0;
  double integral = 0.0;
  double ratio_sharp = 0.0;  // integral / (2 pi sqrt(2c) (1 - e^{-r}))
};

struct RadonBoundReport {
  std::vector<RadonBoundEntry> entry;
  double bound = 0.0;      // 2 pi sqrt(2c)
  double max_ratio = 0.0;  // max |integral| / bound
};

RadonBoundReport radon_bound_check(const ConformalMetric& g, const MagneticField& sigma,
                                   double sqrt_2c, const std::vector<double>& r_grid,
                                   const std::vector<Point>& center_grid);

}  // namespace magflow
