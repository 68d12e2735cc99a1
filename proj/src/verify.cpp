#include "magflow/verify.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <vector>

#include "magflow/crit.hpp"
#include "magflow/field.hpp"
#include "magflow/flow.hpp"
#include "magflow/radon.hpp"

namespace magflow {
namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof(buf), pattern, args);
  va_end(args);
  return std::string(buf);
}

const SurfaceGroup& group() {
  static SurfaceGroup g = build_genus2_group();
  return g;
}

ConformalMetric make_metric(double constant, const std::vector<RadialBump>& bumps) {
  return ConformalMetric(group(), InvariantScalar(group(), constant, bumps));
}

MagneticField make_field(double a, const std::vector<RadialBump>& beta_bumps) {
  return MagneticField(a, InvariantOneForm(group(), beta_bumps));
}

// A check that records the worst margin seen; pass iff every margin is
// nonnegative.  Margins are tolerance minus observed defect.
struct Worst {
  double margin = 1e300;
  std::string note = "ok";

  void observe(double m, const std::string& n) {
    if (m < margin) {
      margin = m;
      note = n;
    }
  }
  bool pass() const { return margin >= 0.0; }
};

CriterionResult criterion_baseline() {
  CriterionResult res{1, "constant-curvature baseline", false, ""};
  const ConformalMetric m = make_metric(0.0, {});
  const MagneticField sig = make_field(1.0, {});
  Worst w;

  const double hf = helicity_formula(m, sig);
  w.observe(1e-12 - std::fabs(hf), fmt("helicity formula %.3e", hf));
  const double hi = helicity_integral(m, sig);
  w.observe(1e-6 - std::fabs(hi), fmt("helicity integral %.3e", hi));
  const auto sh = s_h_value(m, sig);
  if (!sh) {
    res.detail = "s_h undefined on the baseline";
    return res;
  }
  w.observe(1e-12 - std::fabs(*sh - 1.0), fmt("s_h %.15f", *sh));
  const double clb = circle_lower_bound(m, sig, {6.0}, default_center_grid(group()));
  w.observe(clb - 0.495, fmt("circle bound at r=6 %.6f", clb));
  const double up = primitive_upper_bound(m, sig);
  w.observe(1e-10 - std::fabs(up - 0.5), fmt("upper bound %.12f", up));
  const ScInterval sc = s_c_value(estimate_critical_value(m, sig));
  w.observe(sc.lo - (1.0 - 1e-9), fmt("s_c low end %.12f", sc.lo));
  w.observe(1.006 - sc.hi, fmt("s_c high end %.12f", sc.hi));
  w.observe(sc.bounded ? 1.0 : -1.0, "s_c interval bounded");

  res.pass = w.pass();
  res.detail = fmt("H=%.2e..%.2e s_h=%.12f s_c=[%.6f,%.6f] margin %.2e (%s)", hf, hi, *sh, sc.lo,
                   sc.hi, w.margin, w.note.c_str());
  return res;
}

CriterionResult criterion_helicity_grid() {
  CriterionResult res{2, "helicity formula vs integral grid", false, ""};
  const Point beta_center = polar_point(group().base, 1.1, 0.6);
  Worst w;
  double max_defect = 0.0;
  for (double amp : {0.0, 0.1, 0.2}) {
    const std::vector<RadialBump> ub =
        amp == 0.0 ? std::vector<RadialBump>{} : std::vector<RadialBump>{{group().base, amp, 1.3}};
    const ConformalMetric m = make_metric(0.0, ub);
    for (double a : {0.0, 0.5, 1.0}) {
      for (int with_beta = 0; with_beta < 2; ++with_beta) {
        const std::vector<RadialBump> bb =
            with_beta ? std::vector<RadialBump>{{beta_center, 0.15, 1.0}}
                      : std::vector<RadialBump>{};
        const MagneticField sig = make_field(a, bb);
        const double hf = helicity_formula(m, sig);
        const double hi = helicity_integral(m, sig);
        const double tol = 1e-5 * std::fabs(hf) + 1e-6;
        const double defect = std::fabs(hi - hf);
        max_defect = std::max(max_defect, defect);
        w.observe(tol - defect,
                  fmt("amp=%.1f a=%.1f beta=%d formula %.6e integral %.6e", amp, a, with_beta, hf,
                      hi));
      }
    }
  }
  res.pass = w.pass();
  res.detail = fmt("18 configurations, worst absolute defect %.2e, margin %.2e (%s)", max_defect,
                   w.margin, w.note.c_str());
  return res;
}

CriterionResult criterion_kernel_closed_form() {
  CriterionResult res{3, "kernel closed form at alpha=1/2", false, ""};
  Worst w;
  for (double r : {0.5, 1.0, 2.0, 4.0}) {
    const double q = q_kernel_imag(r, 0.5);
    const double closed = 2.0 * kPi * (std::cosh(r) - 1.0);
    w.observe(1e-9 - std::fabs(q - closed) / closed, fmt("r=%.1f rel %.2e", r, std::fabs(q - closed) / closed));
  }
  res.pass = w.pass();
  res.detail = fmt("margin %.2e (%s)", w.margin, w.note.c_str());
  return res;
}

CriterionResult criterion_mean_value() {
  CriterionResult res{4, "eigenfunction mean value identity", false, ""};
  const Point centers[] = {{0.0, 1.0}, {2.0, 0.5}};
  Worst w;
  double max_res = 0.0;
  for (double s : {0.0, 1.0, 2.5}) {
    for (double r : {0.5, 1.0, 2.0}) {
      for (const Point& c : centers) {
        const MeanValueCheck chk = eigenfunction_mean_value_check(s, c, r);
        max_res = std::max(max_res, chk.residual);
        w.observe(1e-6 - chk.residual, fmt("s=%.1f r=%.1f x=%.0f residual %.2e", s, r, c.x, chk.residual));
      }
    }
  }
  res.pass = w.pass();
  res.detail = fmt("18 combinations, worst residual %.2e", max_res);
  return res;
}

CriterionResult criterion_growth() {
  CriterionResult res{5, "kernel growth along crest radii", false, ""};
  double min_ratio = 1e300;
  for (double s : {0.5, 1.0, 3.0}) {
    const auto rows = growth_check(s, 5);  // throws on any violation
    for (const auto& row : rows) min_ratio = std::min(min_ratio, row.value / row.bound);
  }
  res.pass = true;
  res.detail = fmt("s in {0.5, 1, 3}, n <= 5, min value/bound ratio %.4f", min_ratio);
  return res;
}

CriterionResult criterion_flow() {
  CriterionResult res{6, "flow oracles", false, ""};
  const ConformalMetric m = make_metric(0.0, {});
  const MagneticField sig = make_field(1.0, {});
  Worst w;

  // kappa = 2: circle orbit about (0, sqrt 3); with theta = 0 the center
  // sits one radius above the start along the y axis.
  const CircleOrbit orbit2 = circle_orbit_oracle(2.0);
  const Point center{0.0, std::sqrt(3.0)};
  const Trajectory t2 = integrate(m, sig, 2.0, {0.0, 1.0, 0.0}, 8.0, 1e-3);
  double worst_radius = 0.0;
  for (const PhaseState& st : t2.state) {
    worst_radius = std::max(worst_radius, std::fabs(hyp_distance(st.point(), center) - orbit2.radius));
  }
  w.observe(1e-6 - worst_radius, fmt("kappa=2 radius defect %.2e", worst_radius));
  const auto p2 = detect_period(t2, 5e-3);
  if (!p2) {
    res.detail = "kappa=2 period not detected";
    return res;
  }
  w.observe(1e-5 - std::fabs(*p2 - orbit2.period), fmt("kappa=2 period %.6f", *p2));

  // kappa = sqrt 2: period exactly 2 pi.
  const Trajectory tr2 = integrate(m, sig, std::sqrt(2.0), {0.0, 1.0, 0.0}, 13.0, 1e-3);
  const auto pr2 = detect_period(tr2, 5e-3);
  if (!pr2) {
    res.detail = "kappa=sqrt2 period not detected";
    return res;
  }
  w.observe(1e-5 - std::fabs(*pr2 - 2.0 * kPi), fmt("kappa=sqrt2 period %.6f", *pr2));

  // Vertical geodesic: endpoint closed form.
  const MagneticField off = make_field(0.0, {});
  const Trajectory geo = integrate(m, off, 1.0, {0.0, 1.0, 0.5 * kPi}, 2.0, 1e-3);
  const PhaseState& end = geo.state.back();
  const double geo_defect = std::fabs(end.x) + std::fabs(end.y - std::exp(2.0)) / std::exp(2.0);
  w.observe(1e-8 - geo_defect, fmt("geodesic endpoint defect %.2e", geo_defect));

  // Step-doubling convergence factor under dt halving.
  double err[3];
  const double dts[3] = {1e-2, 5e-3, 2.5e-3};
  for (int k = 0; k < 3; ++k) {
    const Trajectory t = integrate(m, off, 1.0, {0.0, 1.0, 0.5 * kPi}, 2.0, dts[k]);
    err[k] = std::fabs(t.state.back().y - std::exp(2.0));
  }
  for (int k = 0; k + 1 < 3; ++k) {
    const double factor = err[k] / err[k + 1];
    w.observe(factor - 12.0, fmt("convergence factor %.2f", factor));
    w.observe(20.0 - factor, fmt("convergence factor %.2f", factor));
  }

  res.pass = w.pass();
  res.detail = fmt("periods %.6f / %.6f, radius defect %.1e, factors %.1f %.1f, margin %.2e (%s)",
                   *p2, *pr2, worst_radius, err[0] / err[1], err[1] / err[2], w.margin,
                   w.note.c_str());
  return res;
}

CriterionResult criterion_surface() {
  CriterionResult res{7, "surface integrity", false, ""};
  const SurfaceGroup& g = group();
  Worst w;

  const double area = domain_quadrature(g, [](const Point&) { return 1.0; }, 48);
  w.observe(1e-6 - std::fabs(area - 4.0 * kPi), fmt("area %.12f", area));
  w.observe(1e-8 - g.relator_residual, fmt("relator residual %.2e", g.relator_residual));

  std::mt19937 rng(7u);
  std::uniform_real_distribution<double> ux(-3.0, 3.0);
  std::uniform_real_distribution<double> uy(std::exp(-1.5), std::exp(1.5));
  std::uniform_int_distribution<int> ugen(0, 7);
  double worst_trip = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Point p{ux(rng), uy(rng)};
    const ReducedPoint q = reduce_point(g, p);
    Isometry word = Isometry::identity();
    for (int k = 0; k < 5; ++k) word = compose(word, g.gen[ugen(rng)]);
    const ReducedPoint back = reduce_point(g, apply(word, q.point));
    worst_trip = std::max(worst_trip, hyp_distance(back.point, q.point));
  }
  w.observe(1e-8 - worst_trip, fmt("round trip %.2e", worst_trip));

  res.pass = w.pass();
  res.detail = fmt("area %.10f, relator %.1e, worst round trip %.1e", area, g.relator_residual,
                   worst_trip);
  return res;
}

CriterionResult criterion_theorem() {
  CriterionResult res{8, "critical vs helicity intensities", false, ""};
  struct Case {
    const char* name;
    double u_const;
    std::vector<RadialBump> u_bumps;
    double a;
    std::vector<RadialBump> beta;
  };
  const Point beta_center = polar_point(group().base, 1.1, 0.6);
  const std::vector<Case> cases = {
      {"baseline", 0.0, {}, 1.0, {}},
      {"half-intensity", 0.0, {}, 0.5, {}},
      {"u-bump-0.2", 0.0, {{group().base, 0.2, 1.3}}, 1.0, {}},
      {"u-bump-0.1", 0.0, {{group().base, 0.1, 1.45}}, 1.0, {}},
      {"u-const-0.3", 0.3, {}, 0.7, {}},
      {"beta-bump", 0.0, {}, 1.0, {{beta_center, 0.15, 1.0}}},
  };
  Worst w;
  double bump_gap = 0.0, bump_gk = 0.0;
  for (const Case& c : cases) {
    const ConformalMetric m = make_metric(c.u_const, c.u_bumps);
    const MagneticField sig = make_field(c.a, c.beta);
    CritBudget budget;
    if (c.u_bumps.empty() && c.beta.empty()) {
      // Constant conformal factor: circle lengths and fluxes are closed
      // forms, so larger comparison circles cost nothing.  The equality
      // cases need them: the bound's defect scales like s_h / cosh^2(r/2).
      budget.r_grid = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 12.0};
    }
    TheoremGapReport rep;
    try {
      rep = theorem_gap_report(m, sig, budget);  // throws if s_c exceeds s_h + 1e-3
    } catch (const std::exception& e) {
      res.detail = fmt("%s: %s", c.name, e.what());
      return res;
    }
    w.observe(rep.s_h + 1e-3 - rep.s_c.hi, fmt("%s s_c.hi %.6f s_h %.6f", c.name, rep.s_c.hi, rep.s_h));
    if (std::string(c.name) == "u-bump-0.2") {
      bump_gap = rep.gap;
      bump_gk = rep.gk_residual;
      w.observe(rep.gap, fmt("strict gap %.3e", rep.gap));
      w.observe(rep.gk_residual + 1e-6, fmt("gk residual %.3e", rep.gk_residual));
    }
  }
  res.pass = w.pass();
  res.detail = fmt("6 configurations; perturbed gap %.3e, gk residual %.3e, margin %.2e (%s)",
                   bump_gap, bump_gk, w.margin, w.note.c_str());
  return res;
}

CriterionResult criterion_proposition() {
  CriterionResult res{9, "proposition equality at a=1/2", false, ""};
  const ConformalMetric m = make_metric(0.0, {});
  const MagneticField sig = make_field(0.5, {});
  const PropositionReport rep = proposition_check(m, sig);
  Worst w;
  w.observe(1e-6 - std::fabs(rep.twice_rho2_c - 0.25), fmt("2 rho^2 c = %.9f", rep.twice_rho2_c));
  w.observe(1e-6 - std::fabs(rep.rhs - 0.25), fmt("1 - H/(2 pi A) = %.9f", rep.rhs));
  w.observe(1e-6 - std::fabs(rep.twice_rho2_c - rep.rhs), "equality defect");
  res.pass = w.pass();
  res.detail = fmt("2rho^2c=%.9f rhs=%.9f margin %.2e (%s)", rep.twice_rho2_c, rep.rhs, w.margin,
                   w.note.c_str());
  return res;
}

CriterionResult criterion_radon() {
  CriterionResult res{10, "radon plumbing", false, ""};
  const SurfaceGroup& g = group();
  std::vector<RadialBump> bumps{{g.base, 0.3, 1.3}, {polar_point(g.base, 1.1, 0.9), -0.2, 1.1}};
  const InvariantScalar raw(g, 0.0, bumps);
  const InvariantScalar h(g, -raw.integral() / (4.0 * kPi), bumps);
  Worst w;

  // Lift independence.
  const Point x{0.3, 1.4};
  const double direct = disk_radon(h, x, 1.2, 96);
  const double lifted = disk_radon(h, apply(g.gen[0], x), 1.2, 96);
  w.observe(1e-8 - std::fabs(direct - lifted), fmt("direct lift defect %.2e", std::fabs(direct - lifted)));
  const double sites = disk_radon_sites(h, x, 5.0);
  const double sites_lifted = disk_radon_sites(h, apply(compose(g.gen[3], g.gen[5]), x), 5.0);
  w.observe(1e-8 - std::fabs(sites - sites_lifted),
            fmt("site-sum lift defect %.2e", std::fabs(sites - sites_lifted)));

  // Direct quadrature vs the per-translate group sum.
  double worst_cross = 0.0;
  const std::pair<double, int> budget[] = {{1.0, 96}, {2.0, 256}, {3.2, 512}};
  const Point centers[] = {g.base, {0.35, 1.2}};
  for (const auto& [r, order] : budget) {
    for (const Point& c : centers) {
      const double d = std::fabs(disk_radon(h, c, r, order) - disk_radon_sites(h, c, r));
      worst_cross = std::max(worst_cross, d);
      w.observe(1e-7 - d, fmt("cross-check at r=%.1f defect %.2e", r, d));
    }
  }

  // Zero-mean precondition.
  bool rejected = false;
  try {
    disk_radon(InvariantScalar(g, 0.1, {}), g.base, 1.0);
  } catch (const std::invalid_argument&) {
    rejected = true;
  }
  w.observe(rejected ? 1.0 : -1.0, "zero-mean enforcement");

  // Zero field transforms to zero.
  const InvariantScalar zero(g, 0.0, {});
  const RadonProbeReport rep = boundedness_probe(zero, {0.5, 2.0, 5.0}, {g.base, x});
  w.observe(rep.max_abs == 0.0 ? 1.0 : -1.0, fmt("zero-field probe max %.2e", rep.max_abs));

  res.pass = w.pass();
  res.detail = fmt("worst cross-check %.2e, margin %.2e (%s)", worst_cross, w.margin,
                   w.note.c_str());
  return res;
}

CriterionResult guarded(CriterionResult (*fn)(), int id, const char* label) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return CriterionResult{id, label, false, fmt("exception: %s", e.what())};
  }
}

}  // namespace

std::vector<CriterionResult> run_acceptance() {
  std::vector<CriterionResult> out;
  out.push_back(guarded(criterion_baseline, 1, "constant-curvature baseline"));
  out.push_back(guarded(criterion_helicity_grid, 2, "helicity formula vs integral grid"));
  out.push_back(guarded(criterion_kernel_closed_form, 3, "kernel closed form at alpha=1/2"));
  out.push_back(guarded(criterion_mean_value, 4, "eigenfunction mean value identity"));
  out.push_back(guarded(criterion_growth, 5, "kernel growth along crest radii"));
  out.push_back(guarded(criterion_flow, 6, "flow oracles"));
  out.push_back(guarded(criterion_surface, 7, "surface integrity"));
  out.push_back(guarded(criterion_theorem, 8, "critical vs helicity intensities"));
  out.push_back(guarded(criterion_proposition, 9, "proposition equality at a=1/2"));
  out.push_back(guarded(criterion_radon, 10, "radon plumbing"));
  return out;
}

bool all_pass(const std::vector<CriterionResult>& results) {
  for (const auto& r : results) {
    if (!r.pass) return false;
  }
  return true;
}

}  // namespace magflow
