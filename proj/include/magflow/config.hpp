#pragma once

// Experiment configuration: one JSON document feeding every command.
// Parsing is strict: unknown keys, wrong types, and out-of-range values are
// rejected with the full field path so a typo points at itself.

#include <stdexcept>
#include <string>
#include <vector>

#include "magflow/flow.hpp"
#include "magflow/halfplane.hpp"
#include "magflow/surface.hpp"

namespace magflow {

struct ConfigError : std::runtime_error {
  std::string path;  // dotted field path, e.g. "flow.dt"
  ConfigError(std::string p, const std::string& msg)
      : std::runtime_error("config error at " + p + ": " + msg), path(std::move(p)) {}
};

struct FlowConfig {
  double s = 2.0;
  double T = 8.0;
  double dt = 1e-3;
  PhaseState initial{0.0, 3.0, 0.0};  // on the closed orbit of the default field
};

struct CritConfig {
  std::vector<double> r_grid;       // empty: library default
  std::vector<Point> center_grid;   // empty: library default
  std::vector<double> amplitude;    // empty: library default family
  int samples = 4096;
  int translate_count = 16;
};

struct RadonConfig {
  std::vector<double> r_grid{0.5, 1.0, 2.0, 4.0};
  std::vector<double> s{0.0, 1.0, 2.5};
  std::vector<double> alpha{0.0, 0.25, 0.5};
  std::vector<Point> probe_centers{{0.0, 1.0}, {0.35, 1.2}};
  int growth_n = 3;
};

struct Tolerances {
  double quadrature = 1e-9;   // quadrature self-consistency target
  double cross_check = 1e-6;  // independent-formulation agreement
  double geometry = 1e-8;     // group/domain residuals
};

struct Config {
  double metric_constant = 0.0;
  std::vector<RadialBump> metric_bumps;
  double a = 1.0;
  std::vector<RadialBump> beta0_bumps;
  FlowConfig flow;
  CritConfig crit;
  RadonConfig radon;
  Tolerances tolerances;
};

// Largest admissible bump support: half the systole of the surface, so a
// bump never overlaps its own translates.
double injectivity_radius();

Config parse_config(const std::string& json_text);
Config load_config(const std::string& file_path);

}  // namespace magflow
