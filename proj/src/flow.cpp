#include "magflow/flow.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace magflow {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::array<double, 3> rhs(const ConformalMetric& g, const MagneticField& sigma, double s,
                          const std::array<double, 3>& st) {
  const Point p{st[0], st[1]};
  const ScalarJet uj = g.u().jet(p);
  const double emw = p.y * std::exp(-uj.value);  // e^{-w}, w = u - ln y
  const double wx = uj.dx;
  const double wy = uj.dy - 1.0 / p.y;
  const double c = std::cos(st[2]), sn = std::sin(st[2]);
  const double f = std::exp(-2.0 * uj.value) * (sigma.a() + sigma.exact_density(p));
  return {emw * c, emw * sn, emw * (wy * c - wx * sn) + s * f};
}

std::array<double, 3> rk4_step(const ConformalMetric& g, const MagneticField& sigma,
                               double s, const std::array<double, 3>& st, double h) {
  const auto k1 = rhs(g, sigma, s, st);
  const auto at = [&](const std::array<double, 3>& k, double c) {
    return std::array<double, 3>{st[0] + c * k[0], st[1] + c * k[1], st[2] + c * k[2]};
  };
  const auto k2 = rhs(g, sigma, s, at(k1, h / 2));
  const auto k3 = rhs(g, sigma, s, at(k2, h / 2));
  const auto k4 = rhs(g, sigma, s, at(k3, h));
  return {st[0] + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
          st[1] + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]),
          st[2] + h / 6 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])};
}

double wrap_angle(double th) {
  double w = std::fmod(th, 2.0 * kPi);
  if (w < 0.0) w += 2.0 * kPi;
  return w;
}

double angle_gap(double a, double b) {
  return std::fabs(std::remainder(a - b, 2.0 * kPi));
}

double phase_distance(const PhaseState& a, const PhaseState& b) {
  return hyp_distance(a.point(), b.point()) + angle_gap(a.theta, b.theta);
}

}  // namespace

std::array<double, 3> vector_field(const ConformalMetric& g, const MagneticField& sigma,
                                   double s, const PhaseState& st) {
  if (!(st.y > 1e-300) || !std::isfinite(st.x) || !std::isfinite(st.y) ||
      !std::isfinite(st.theta)) {
    throw std::invalid_argument("vector_field: state outside numeric range");
  }
  return rhs(g, sigma, s, {st.x, st.y, st.theta});
}

Trajectory integrate(const ConformalMetric& g, const MagneticField& sigma, double s,
                     const PhaseState& start, double T, double dt, double err_tol) {
  if (!(T > 0.0) || !(dt > 0.0)) {
    throw std::invalid_argument("integrate: T and dt must be positive");
  }
  (void)vector_field(g, sigma, s, start);  // validates the state

  const std::size_t n = std::max<std::size_t>(1, std::llround(T / dt));
  const double h = T / static_cast<double>(n);

  Trajectory out;
  out.dt = h;
  out.time.reserve(n + 1);
  out.state.reserve(n + 1);

  std::array<double, 3> cur{start.x, start.y, start.theta};
  out.time.push_back(0.0);
  out.state.push_back(PhaseState{cur[0], cur[1], wrap_angle(cur[2])});

  for (std::size_t i = 0; i < n; ++i) {
    const auto full = rk4_step(g, sigma, s, cur, h);
    const auto half = rk4_step(g, sigma, s, cur, h / 2);
    const auto next = rk4_step(g, sigma, s, half, h / 2);

    // Chart-scale step-doubling estimate of the local error.
    const double yscale = std::max(next[1], 1e-300);
    const double err = (std::fabs(next[0] - full[0]) / yscale +
                        std::fabs(next[1] - full[1]) / yscale +
                        std::fabs(next[2] - full[2])) /
                       15.0;
    if (!(err <= err_tol) || !std::isfinite(next[1]) || !(next[1] > 0.0)) {
      throw std::runtime_error("integrate: error estimate " + std::to_string(err) +
                               " exceeds tolerance at t=" +
                               std::to_string(out.time.back() + h));
    }
    out.max_step_error = std::max(out.max_step_error, err);

    cur = next;
    out.time.push_back(h * static_cast<double>(i + 1));
    out.state.push_back(PhaseState{cur[0], cur[1], wrap_angle(cur[2])});
  }
  return out;
}

CircleOrbit circle_orbit_oracle(double kappa) {
  if (!(kappa > 1.0)) {
    throw std::invalid_argument(
        "circle_orbit_oracle: closed circles need curvature kappa > 1");
  }
  CircleOrbit orbit;
  orbit.radius = std::atanh(1.0 / kappa);  // arccoth
  orbit.period = 2.0 * kPi * std::sinh(orbit.radius);
  return orbit;
}

std::optional<double> detect_period(const Trajectory& traj, double tol) {
  if (traj.state.size() < 3) return std::nullopt;
  const PhaseState& p0 = traj.state.front();

  // Wait until the trajectory has clearly left the start before looking for
  // a return.
  const double escape = std::max(10.0 * tol, 1e-2);
  bool escaped = false;
  for (std::size_t i = 1; i + 1 < traj.state.size(); ++i) {
    const double prev = phase_distance(traj.state[i - 1], p0);
    const double here = phase_distance(traj.state[i], p0);
    const double nxt = phase_distance(traj.state[i + 1], p0);
    if (!escaped) {
      if (here > escape) escaped = true;
      continue;
    }
    if (here <= prev && here <= nxt && here < tol) {
      // Squared phase distance is locally quadratic at a transversal return;
      // the parabola vertex refines the sampled minimum.
      const double a = prev * prev, b = here * here, c = nxt * nxt;
      const double denom = a - 2.0 * b + c;
      double shift = 0.0;
      if (denom > 0.0) shift = 0.5 * (a - c) / denom;
      return traj.time[i] + shift * traj.dt;
    }
  }
  return std::nullopt;
}

}  // namespace magflow
