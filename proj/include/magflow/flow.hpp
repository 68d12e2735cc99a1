#pragma once

// The magnetic flow F_s = X + s f V on the unit circle bundle, integrated in
// half-plane chart coordinates.  A state is (x, y, theta) with theta the
// Euclidean chart angle of the g-unit tangent, so g-speed is exactly 1 by
// representation and the ODE is three scalar equations:
//
//   w = u - ln y (chart conformal exponent, g = e^{2w} |dz|^2)
//   dx/dt     = e^{-w} cos theta
//   dy/dt     = e^{-w} sin theta
//   dtheta/dt = e^{-w} (w_y cos theta - w_x sin theta) + s f
//
// Positive f turns the trajectory toward its left normal; the convention is
// pinned by the circle-orbit oracle (constant s f = kappa > 1 gives a circle
// of radius arccoth kappa).
//
// Integration runs in the universal cover; no reduction mid-flight.  Chart
// coordinates lose precision at hyperbolic distances beyond ~30 from the
// domain, which is far outside desk scale.

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "magflow/field.hpp"

namespace magflow {

struct PhaseState {
  double x = 0.0;
  double y = 1.0;
  double theta = 0.0;

  Point point() const { return Point{x, y}; }
};

struct Trajectory {
  std::vector<double> time;        // g-arclength parameter
  std::vector<PhaseState> state;   // theta normalized to [0, 2 pi)
  double dt = 0.0;                 // actual uniform step
  double max_step_error = 0.0;     // step-doubling estimate, max over steps
};

std::array<double, 3> vector_field(const ConformalMetric& g, const MagneticField& sigma,
                                   double s, const PhaseState& st);

// Classical RK4 advancing by two half-steps per output step, with the
// single-full-step solution used for a step-doubling error estimate
// (|two-half - full| / 15 per step).  Aborts when the estimate exceeds
// err_tol at any step.
Trajectory integrate(const ConformalMetric& g, const MagneticField& sigma, double s,
                     const PhaseState& start, double T, double dt,
                     double err_tol = 1e-6);

struct CircleOrbit {
  double radius = 0.0;
  double period = 0.0;
};

// Closed orbit of constant geodesic curvature kappa > 1 on the curvature -1
// base: radius arccoth(kappa), g0-period 2 pi sinh(radius).
CircleOrbit circle_orbit_oracle(double kappa);

// First return time to within tol of the initial phase (hyperbolic distance
// plus angle distance), located at a sampled local minimum and refined by a
// parabola through the squared distances.  Empty when no return occurs.
std::optional<double> detect_period(const Trajectory& traj, double tol);

}  // namespace magflow
