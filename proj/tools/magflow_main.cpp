// magflow: experiments with magnetic flows on a genus-2 hyperbolic surface.
//
// Subcommands: helicity, critical, flow, radon (kernel|meanvalue|probe|growth),
// verify.  One JSON config drives everything; tables go to --output or stdout
// as CSV ('.' decimal, LF, header row), reports as JSON with sorted keys, so
// identical configs produce byte-identical artifacts.
//
// Exit codes: 0 success, 1 verification failure (a computed quantity violated
// its tolerance or a bound), 2 usage or configuration error.
// MAGFLOW_THREADS caps internal parallelism (grid sweeps in the crit module).

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "magflow/config.hpp"
#include "magflow/crit.hpp"
#include "magflow/field.hpp"
#include "magflow/flow.hpp"
#include "magflow/radon.hpp"
#include "magflow/verify.hpp"

namespace {

using magflow::Config;
using nlohmann::json;

const magflow::SurfaceGroup& group() {
  static magflow::SurfaceGroup g = magflow::build_genus2_group();
  return g;
}

magflow::ConformalMetric build_metric(const Config& cfg) {
  return magflow::ConformalMetric(
      group(), magflow::InvariantScalar(group(), cfg.metric_constant, cfg.metric_bumps));
}

magflow::MagneticField build_field(const Config& cfg) {
  return magflow::MagneticField(cfg.a, magflow::InvariantOneForm(group(), cfg.beta0_bumps));
}

magflow::CritBudget build_budget(const Config& cfg) {
  magflow::CritBudget b;
  if (!cfg.crit.r_grid.empty()) {
    b.r_grid = cfg.crit.r_grid;
  } else if (cfg.metric_bumps.empty() && cfg.beta0_bumps.empty()) {
    // Fully constant data: circle lengths and fluxes are closed forms, so
    // larger comparison circles are free and tighten the lower bound, which
    // matters when s_h is large and the theorem guard is absolute.
    b.r_grid = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 12.0};
  }
  if (!cfg.crit.center_grid.empty()) b.center_grid = cfg.crit.center_grid;
  if (!cfg.crit.amplitude.empty()) b.family.amplitude = cfg.crit.amplitude;
  b.family.samples = cfg.crit.samples;
  b.family.translate_count = cfg.crit.translate_count;
  return b;
}

std::string csv_number(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Primary artifact sink: --output path, or stdout when none was given.
int emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return 0;
  }
  std::ofstream out(output_path, std::ios::binary);
  if (!out) {
    std::fprintf(stderr, "cannot write %s\n", output_path.c_str());
    return 2;
  }
  out << text;
  return 0;
}

// Secondary summary: stdout when the table went to a file, stderr otherwise,
// so the primary stream stays parseable.
void emit_summary(const json& j, const std::string& output_path) {
  const std::string text = j.dump(2) + "\n";
  std::FILE* dst = output_path.empty() ? stderr : stdout;
  std::fwrite(text.data(), 1, text.size(), dst);
}

json point_json(const magflow::Point& p) { return json::array({p.x, p.y}); }

int cmd_helicity(const Config& cfg, const std::string& output_path) {
  const magflow::ConformalMetric m = build_metric(cfg);
  const magflow::MagneticField sig = build_field(cfg);
  const double hf = magflow::helicity_formula(m, sig);
  const double hi = magflow::helicity_integral(m, sig);
  const auto sh = magflow::s_h_value(m, sig);
  const double tol = cfg.tolerances.cross_check;
  const double defect = std::fabs(hi - hf);

  json rep;
  rep["area"] = m.area();
  rep["chi"] = -2;
  rep["total_flux"] = magflow::total_flux(sig);
  rep["helicity_formula"] = hf;
  rep["helicity_integral"] = hi;
  rep["difference"] = defect;
  rep["tolerance"] = tol;
  rep["s_h"] = sh ? json(*sh) : json(nullptr);
  const int rc = emit(rep.dump(2) + "\n", output_path);
  if (rc != 0) return rc;
  if (defect > tol * (1.0 + std::fabs(hf))) {
    std::fprintf(stderr, "helicity cross-check failed: |%.12e - %.12e| > tolerance\n", hi, hf);
    return 1;
  }
  return 0;
}

int cmd_critical(const Config& cfg, const std::string& output_path) {
  const magflow::ConformalMetric m = build_metric(cfg);
  const magflow::MagneticField sig = build_field(cfg);
  const magflow::CritBudget budget = build_budget(cfg);

  json rep;
  magflow::CriticalEstimate est;
  if (std::fabs(magflow::total_flux(sig)) > 0.0) {
    // Throws when the theorem inequality s_c <= s_h fails; exit code 1 below.
    const magflow::TheoremGapReport gap = magflow::theorem_gap_report(m, sig, budget);
    est = gap.estimate;
    rep["s_h"] = gap.s_h;
    rep["theorem"] = {{"gap", gap.gap},
                      {"gk_residual", gap.gk_residual},
                      {"gk_rhs", gap.gk_rhs},
                      {"rho_g", gap.rho_g},
                      {"u_constant", gap.u_constant},
                      {"beta_trivial", gap.beta_trivial}};
  } else {
    est = magflow::estimate_critical_value(m, sig, budget);
    rep["s_h"] = nullptr;
    rep["theorem"] = nullptr;
  }
  const magflow::ScInterval sc = magflow::s_c_value(est);
  rep["c_lower"] = est.lower;
  rep["c_upper"] = est.upper;
  rep["best_circle"] = {{"center", point_json(est.best_circle.center)},
                        {"radius", est.best_circle.radius}};
  rep["best_amplitude"] = est.best_amplitude;
  rep["best_shape"] = est.best_shape;
  rep["sample_count"] = est.sample_count;
  rep["s_c"] = {{"lo", sc.lo}, {"hi", sc.bounded ? json(sc.hi) : json(nullptr)},
                {"bounded", sc.bounded}};

  const magflow::PropositionReport prop = magflow::proposition_check(m, sig, budget.family);
  rep["proposition"] = {{"c_upper", prop.c_upper},
                        {"rho_g", prop.rho_g},
                        {"twice_c", prop.twice_c},
                        {"twice_rho2_c", prop.twice_rho2_c},
                        {"rhs", prop.rhs}};
  return emit(rep.dump(2) + "\n", output_path);
}

int cmd_flow(const Config& cfg, const std::string& output_path) {
  const magflow::ConformalMetric m = build_metric(cfg);
  const magflow::MagneticField sig = build_field(cfg);
  const magflow::Trajectory traj = magflow::integrate(m, sig, cfg.flow.s, cfg.flow.initial,
                                                      cfg.flow.T, cfg.flow.dt);
  std::string csv = "t,x,y,theta\n";
  for (std::size_t i = 0; i < traj.time.size(); ++i) {
    csv += csv_number(traj.time[i]);
    csv += ',';
    csv += csv_number(traj.state[i].x);
    csv += ',';
    csv += csv_number(traj.state[i].y);
    csv += ',';
    csv += csv_number(traj.state[i].theta);
    csv += '\n';
  }
  const int rc = emit(csv, output_path);
  if (rc != 0) return rc;

  const auto period = magflow::detect_period(traj, 5e-3);
  json summary;
  summary["samples"] = traj.time.size();
  summary["dt"] = traj.dt;
  summary["max_step_error"] = traj.max_step_error;
  summary["period"] = period ? json(*period) : json(nullptr);
  emit_summary(summary, output_path);
  return 0;
}

int cmd_radon(const Config& cfg, const std::string& mode, const std::string& output_path) {
  if (mode == "kernel") {
    const auto rows = magflow::kernel_table(cfg.radon.r_grid, cfg.radon.s, cfg.radon.alpha);
    std::string csv = "r,s_or_alpha,value\n";
    for (const auto& row : rows) {
      csv += csv_number(row.r);
      csv += ',';
      csv += csv_number(row.s);
      csv += ',';
      csv += csv_number(row.value);
      csv += '\n';
    }
    return emit(csv, output_path);
  }

  if (mode == "meanvalue") {
    const magflow::Point centers[] = {{0.0, 1.0}, {2.0, 0.5}};
    json rows = json::array();
    double max_residual = 0.0;
    for (double s : cfg.radon.s) {
      for (double r : cfg.radon.r_grid) {
        for (const magflow::Point& c : centers) {
          const magflow::MeanValueCheck chk = magflow::eigenfunction_mean_value_check(s, c, r);
          max_residual = std::max(max_residual, chk.residual);
          rows.push_back({{"s", s},
                          {"r", r},
                          {"center", point_json(c)},
                          {"lhs_re", chk.lhs_re},
                          {"rhs_re", chk.rhs_re},
                          {"lhs_im", chk.lhs_im},
                          {"rhs_im", chk.rhs_im},
                          {"residual", chk.residual}});
        }
      }
    }
    json rep;
    rep["rows"] = rows;
    rep["max_residual"] = max_residual;
    rep["tolerance"] = cfg.tolerances.cross_check;
    const int rc = emit(rep.dump(2) + "\n", output_path);
    if (rc != 0) return rc;
    if (max_residual > cfg.tolerances.cross_check) {
      std::fprintf(stderr, "mean value residual %.3e exceeds tolerance %.3e\n", max_residual,
                   cfg.tolerances.cross_check);
      return 1;
    }
    return 0;
  }

  if (mode == "probe") {
    // The probe field is the metric bump list recentered to zero mean; with
    // no bumps it is identically zero and so is the transform.
    const magflow::InvariantScalar raw(group(), 0.0, cfg.metric_bumps);
    const double compensate = -raw.integral() / (16.0 * std::atan(1.0));
    const magflow::InvariantScalar h(group(), compensate, cfg.metric_bumps);
    const magflow::RadonProbeReport rep =
        magflow::boundedness_probe(h, cfg.radon.r_grid, cfg.radon.probe_centers);
    std::string csv = "r,x_index,value\n";
    for (std::size_t j = 0; j < rep.radius.size(); ++j) {
      for (std::size_t i = 0; i < rep.center.size(); ++i) {
        csv += csv_number(rep.radius[j]);
        csv += ',';
        csv += std::to_string(i);
        csv += ',';
        csv += csv_number(rep.value[i][j]);
        csv += '\n';
      }
    }
    const int rc = emit(csv, output_path);
    if (rc != 0) return rc;
    json summary;
    summary["max_abs"] = rep.max_abs;
    summary["running_max"] = rep.running_max;
    emit_summary(summary, output_path);
    return 0;
  }

  if (mode == "growth") {
    json rows = json::array();
    bool any = false;
    for (double s : cfg.radon.s) {
      if (!(s > 0.0)) continue;
      any = true;
      // Throws when the crest bound or strict growth fails; exit code 1.
      for (const auto& row : magflow::growth_check(s, cfg.radon.growth_n)) {
        rows.push_back(
            {{"s", s}, {"n", row.n}, {"r", row.r}, {"value", row.value}, {"bound", row.bound}});
      }
    }
    if (!any) {
      std::fprintf(stderr, "config error at radon.s: growth needs at least one s > 0\n");
      return 2;
    }
    json rep;
    rep["n_max"] = cfg.radon.growth_n;
    rep["rows"] = rows;
    return emit(rep.dump(2) + "\n", output_path);
  }

  std::fprintf(stderr, "unknown radon mode '%s' (kernel|meanvalue|probe|growth)\n", mode.c_str());
  return 2;
}

int cmd_verify(const std::string& output_path) {
  const auto results = magflow::run_acceptance();
  std::string table;
  for (const auto& r : results) {
    table += r.pass ? "PASS" : "FAIL";
    table += " criterion-" + std::to_string(r.id) + " " + r.label + ": " + r.detail + "\n";
  }
  const int rc = emit(table, output_path);
  if (rc != 0) return rc;
  return magflow::all_pass(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "magflow: helicity, critical values, magnetic flows, and disk Radon transforms\n"
      "on a genus-2 hyperbolic surface.  MAGFLOW_THREADS caps internal parallelism."};
  app.require_subcommand(1);

  std::string config_path, output_path, radon_mode;
  auto* helicity = app.add_subcommand("helicity", "helicity by formula and by integral, s_h");
  auto* critical = app.add_subcommand("critical", "two-sided critical value bounds, s_c vs s_h");
  auto* flow = app.add_subcommand("flow", "integrate the magnetic flow, CSV trajectory");
  auto* radon = app.add_subcommand("radon", "kernel tables, mean value, probe, growth");
  radon->add_option("mode", radon_mode, "kernel|meanvalue|probe|growth")->required();
  auto* verify = app.add_subcommand("verify", "run the acceptance battery");
  for (CLI::App* cmd : {helicity, critical, flow, radon}) {
    cmd->add_option("--config", config_path, "JSON configuration file")->required();
    cmd->add_option("--output", output_path, "write the primary artifact here instead of stdout");
  }
  verify->add_option("--config", config_path, "optional: validated, battery uses built-in setups");
  verify->add_option("--output", output_path, "write the pass/fail table here too");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    Config cfg;
    if (!config_path.empty()) cfg = magflow::load_config(config_path);
    if (helicity->parsed()) return cmd_helicity(cfg, output_path);
    if (critical->parsed()) return cmd_critical(cfg, output_path);
    if (flow->parsed()) return cmd_flow(cfg, output_path);
    if (radon->parsed()) return cmd_radon(cfg, radon_mode, output_path);
    if (verify->parsed()) return cmd_verify(output_path);
  } catch (const magflow::ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "verification failure: %s\n", e.what());
    return 1;
  }
  return 2;
}
