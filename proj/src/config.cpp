#include "magflow/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

namespace magflow {
namespace {

using nlohmann::json;

[[noreturn]] void fail_at(const std::string& path, const std::string& msg) {
  throw ConfigError(path, msg);
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : keys) {
      if (item.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) fail_at(path.empty() ? item.key() : path + "." + item.key(), "unknown field");
  }
}

const json* field(const json& j, const char* key) {
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) fail_at(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail_at(path, "must be finite");
  return v;
}

double positive_at(const json& j, const std::string& path) {
  const double v = number_at(j, path);
  if (!(v > 0.0)) fail_at(path, "must be positive");
  return v;
}

int count_at(const json& j, const std::string& path, int min_value) {
  if (!j.is_number_integer()) fail_at(path, "expected an integer");
  const long long v = j.get<long long>();
  if (v < min_value) fail_at(path, "must be >= " + std::to_string(min_value));
  if (v > 1000000) fail_at(path, "unreasonably large");
  return static_cast<int>(v);
}

Point point_at(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) fail_at(path, "expected a point as [x, y]");
  Point p{number_at(j[0], path + "[0]"), number_at(j[1], path + "[1]")};
  if (!(p.y > 0.0)) fail_at(path + "[1]", "y must be positive (upper half-plane)");
  return p;
}

std::vector<double> grid_at(const json& j, const std::string& path, bool require_positive) {
  if (!j.is_array() || j.empty()) fail_at(path, "expected a nonempty array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    out.push_back(require_positive ? positive_at(j[i], p) : number_at(j[i], p));
  }
  return out;
}

std::vector<Point> points_at(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail_at(path, "expected a nonempty array of points");
  std::vector<Point> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(point_at(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<RadialBump> bumps_at(const json& j, const std::string& path) {
  if (!j.is_array()) fail_at(path, "expected an array of bumps");
  std::vector<RadialBump> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    const json& b = j[i];
    if (!b.is_object()) fail_at(p, "expected a bump object");
    check_keys(b, p, {"center", "amplitude", "support"});
    RadialBump bump;
    const json* center = field(b, "center");
    if (!center) fail_at(p + ".center", "required");
    bump.center = point_at(*center, p + ".center");
    const json* amp = field(b, "amplitude");
    if (!amp) fail_at(p + ".amplitude", "required");
    bump.amplitude = number_at(*amp, p + ".amplitude");
    const json* sup = field(b, "support");
    if (!sup) fail_at(p + ".support", "required");
    bump.support = positive_at(*sup, p + ".support");
    if (bump.support >= injectivity_radius()) {
      fail_at(p + ".support", "must stay below the injectivity radius " +
                                  std::to_string(injectivity_radius()));
    }
    out.push_back(bump);
  }
  return out;
}

void parse_metric(const json& j, Config& cfg) {
  check_keys(j, "metric", {"constant", "bumps"});
  if (const json* c = field(j, "constant")) cfg.metric_constant = number_at(*c, "metric.constant");
  if (const json* b = field(j, "bumps")) cfg.metric_bumps = bumps_at(*b, "metric.bumps");
}

void parse_magnetic(const json& j, Config& cfg) {
  check_keys(j, "magnetic", {"a", "beta0"});
  if (const json* a = field(j, "a")) cfg.a = number_at(*a, "magnetic.a");
  if (const json* b = field(j, "beta0")) cfg.beta0_bumps = bumps_at(*b, "magnetic.beta0");
}

void parse_flow(const json& j, Config& cfg) {
  check_keys(j, "flow", {"s", "T", "dt", "initial"});
  if (const json* s = field(j, "s")) cfg.flow.s = positive_at(*s, "flow.s");
  if (const json* t = field(j, "T")) cfg.flow.T = positive_at(*t, "flow.T");
  if (const json* dt = field(j, "dt")) cfg.flow.dt = positive_at(*dt, "flow.dt");
  if (const json* init = field(j, "initial")) {
    if (!init->is_array() || init->size() != 3) {
      fail_at("flow.initial", "expected [x, y, theta]");
    }
    cfg.flow.initial.x = number_at((*init)[0], "flow.initial[0]");
    cfg.flow.initial.y = number_at((*init)[1], "flow.initial[1]");
    if (!(cfg.flow.initial.y > 0.0)) fail_at("flow.initial[1]", "y must be positive");
    cfg.flow.initial.theta = number_at((*init)[2], "flow.initial[2]");
  }
}

void parse_crit(const json& j, Config& cfg) {
  check_keys(j, "crit", {"r_grid", "center_grid", "amplitude", "samples", "translate_count"});
  if (const json* g = field(j, "r_grid")) cfg.crit.r_grid = grid_at(*g, "crit.r_grid", true);
  if (const json* c = field(j, "center_grid")) {
    cfg.crit.center_grid = points_at(*c, "crit.center_grid");
  }
  if (const json* a = field(j, "amplitude")) cfg.crit.amplitude = grid_at(*a, "crit.amplitude", false);
  if (const json* s = field(j, "samples")) cfg.crit.samples = count_at(*s, "crit.samples", 16);
  if (const json* t = field(j, "translate_count")) {
    cfg.crit.translate_count = count_at(*t, "crit.translate_count", 0);
  }
}

void parse_radon(const json& j, Config& cfg) {
  check_keys(j, "radon", {"r_grid", "s", "alpha", "probe_centers", "growth_n"});
  if (const json* g = field(j, "r_grid")) cfg.radon.r_grid = grid_at(*g, "radon.r_grid", true);
  if (const json* s = field(j, "s")) cfg.radon.s = grid_at(*s, "radon.s", false);
  if (const json* a = field(j, "alpha")) {
    cfg.radon.alpha = grid_at(*a, "radon.alpha", false);
    for (std::size_t i = 0; i < cfg.radon.alpha.size(); ++i) {
      if (cfg.radon.alpha[i] < 0.0 || cfg.radon.alpha[i] > 0.5) {
        fail_at("radon.alpha[" + std::to_string(i) + "]", "must lie in [0, 1/2]");
      }
    }
  }
  if (const json* p = field(j, "probe_centers")) {
    cfg.radon.probe_centers = points_at(*p, "radon.probe_centers");
  }
  if (const json* n = field(j, "growth_n")) cfg.radon.growth_n = count_at(*n, "radon.growth_n", 1);
}

void parse_tolerances(const json& j, Config& cfg) {
  check_keys(j, "tolerances", {"quadrature", "cross_check", "geometry"});
  if (const json* q = field(j, "quadrature")) {
    cfg.tolerances.quadrature = positive_at(*q, "tolerances.quadrature");
  }
  if (const json* c = field(j, "cross_check")) {
    cfg.tolerances.cross_check = positive_at(*c, "tolerances.cross_check");
  }
  if (const json* g = field(j, "geometry")) {
    cfg.tolerances.geometry = positive_at(*g, "tolerances.geometry");
  }
}

}  // namespace

double injectivity_radius() {
  static const double r = std::acosh(1.0 + std::sqrt(2.0));
  return r;
}

Config parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("<document>", "top level must be an object");
  check_keys(j, "", {"metric", "magnetic", "flow", "crit", "radon", "tolerances"});

  Config cfg;
  const struct {
    const char* key;
    void (*parse)(const json&, Config&);
  } sections[] = {{"metric", parse_metric},   {"magnetic", parse_magnetic},
                  {"flow", parse_flow},       {"crit", parse_crit},
                  {"radon", parse_radon},     {"tolerances", parse_tolerances}};
  for (const auto& sec : sections) {
    if (const json* s = field(j, sec.key)) {
      if (!s->is_object()) fail_at(sec.key, "expected an object");
      sec.parse(*s, cfg);
    }
  }
  return cfg;
}

Config load_config(const std::string& file_path) {
  std::ifstream in(file_path, std::ios::binary);
  if (!in) throw ConfigError("<file>", "cannot open " + file_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace magflow
