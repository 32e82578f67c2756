#include "config.hpp"

#include <cmath>

#include "error.hpp"

namespace totmom::app {

using nlohmann::ordered_json;

void config_error(const std::string& field, const std::string& what) {
  fail(ErrorCode::Config, field.empty() ? what : field + ": " + what);
}

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double as_number(const ordered_json& v, const std::string& field) {
  if (!v.is_number()) config_error(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) config_error(field, "must be finite");
  return x;
}

std::int64_t as_int(const ordered_json& v, const std::string& field) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double x = v.get<double>();
    if (std::isfinite(x) && x == std::round(x) && std::abs(x) < 9e15) return static_cast<std::int64_t>(x);
  }
  config_error(field, "expected an integer");
}

}  // namespace

double get_number(const ordered_json& obj, const std::string& path, const std::string& key) {
  if (!obj.is_object() || !obj.contains(key)) config_error(join(path, key), "missing required field");
  return as_number(obj.at(key), join(path, key));
}

double get_number_or(const ordered_json& obj, const std::string& path, const std::string& key, double fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  return as_number(obj.at(key), join(path, key));
}

std::int64_t get_int(const ordered_json& obj, const std::string& path, const std::string& key) {
  if (!obj.is_object() || !obj.contains(key)) config_error(join(path, key), "missing required field");
  return as_int(obj.at(key), join(path, key));
}

std::int64_t get_int_or(const ordered_json& obj, const std::string& path, const std::string& key, std::int64_t fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  return as_int(obj.at(key), join(path, key));
}

std::vector<double> get_numbers(const ordered_json& obj, const std::string& path, const std::string& key) {
  const std::string field = join(path, key);
  if (!obj.is_object() || !obj.contains(key)) config_error(field, "missing required field");
  const auto& a = obj.at(key);
  if (!a.is_array() || a.empty()) config_error(field, "expected a nonempty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(as_number(a[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

const ordered_json& get_block(const ordered_json& doc, const std::string& key) {
  static const ordered_json empty = ordered_json::object();
  if (!doc.contains(key)) return empty;
  if (!doc.at(key).is_object()) config_error(key, "expected an object");
  return doc.at(key);
}

Overrides parse_overrides(const std::string& json_text) {
  Overrides ov;
  if (json_text.empty()) return ov;
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    config_error("overrides", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) config_error("overrides", "expected an object");
  if (j.contains("format")) ov.format = j.at("format").get<std::string>();
  if (j.contains("out")) ov.out = j.at("out").get<std::string>();
  if (j.contains("tol")) ov.tol = as_number(j.at("tol"), "--tol");
  if (j.contains("emax")) ov.emax = as_number(j.at("emax"), "--emax");
  if (j.contains("units")) ov.units = j.at("units").get<std::string>();
  if (j.contains("threads")) {
    const auto t = as_int(j.at("threads"), "--threads");
    if (t < 1 || t > 256) config_error("--threads", "must lie in [1, 256]");
    ov.threads = static_cast<unsigned>(t);
  }
  return ov;
}

RunConfig parse_config(const std::string& json_text, const Overrides& ov) {
  RunConfig c;
  try {
    c.doc = json_text.empty() ? ordered_json::object() : ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    config_error("config", std::string("invalid JSON: ") + e.what());
  }
  if (!c.doc.is_object()) config_error("config", "configuration must be a JSON object");
  auto& doc = c.doc;
  if (ov.format) doc["output"]["format"] = *ov.format;
  if (ov.out) doc["output"]["path"] = *ov.out;
  if (ov.tol) doc["tolerances"]["psd"] = *ov.tol;
  if (ov.emax) doc["e_max"] = *ov.emax;
  if (ov.units) doc["units"] = *ov.units;
  if (ov.threads) doc["threads"] = *ov.threads;

  if (doc.contains("units")) {
    const auto& u = doc.at("units");
    if (u.is_string()) {
      c.units_label = u.get<std::string>();
      if (c.units_label == "natural") c.units = Units::natural();
      else if (c.units_label == "si") c.units = Units::si_helium4();
      else config_error("units", "expected \"natural\", \"si\" or an object");
    } else if (u.is_object()) {
      c.units_label = "custom";
      c.units.hbar = get_number_or(u, "units", "hbar", 1.0);
      c.units.mass = get_number_or(u, "units", "mass", 1.0);
      c.units.kB = get_number_or(u, "units", "k_B", 1.0);
      if (!(c.units.hbar > 0.0 && c.units.mass > 0.0 && c.units.kB > 0.0))
        config_error("units", "hbar, mass and k_B must be positive");
    } else {
      config_error("units", "expected a string or an object");
    }
  }

  const auto& g = get_block(doc, "geometry");
  if (!g.empty()) {
    c.dim = static_cast<int>(get_int_or(g, "geometry", "d", 1));
    if (c.dim < 1 || c.dim > 3) config_error("geometry.d", "must be 1, 2 or 3");
    const bool hasL = g.contains("L"), hasGrid = g.contains("L_grid");
    if (hasL == hasGrid) config_error("geometry.L", "exactly one of L and L_grid is required");
    if (hasL) {
      c.L = get_number(g, "geometry", "L");
      if (!(*c.L > 0.0)) config_error("geometry.L", "must be positive");
    } else {
      c.L_grid = get_numbers(g, "geometry", "L_grid");
      for (std::size_t i = 0; i < c.L_grid.size(); ++i) {
        if (!(c.L_grid[i] > 0.0)) config_error("geometry.L_grid", "entries must be positive");
        if (i > 0 && !(c.L_grid[i] > c.L_grid[i - 1])) config_error("geometry.L_grid", "must be strictly increasing");
      }
    }
    const bool hasN = g.contains("N"), hasRho = g.contains("rho");
    if (hasN == hasRho) config_error("geometry.N", "exactly one of N and rho is required");
    if (hasN) {
      c.N = get_int(g, "geometry", "N");
      if (*c.N < 1) config_error("geometry.N", "must be >= 1");
    } else {
      c.rho = get_number(g, "geometry", "rho");
      if (!(*c.rho > 0.0)) config_error("geometry.rho", "must be positive");
    }
  }

  const auto& th = get_block(doc, "thermal");
  if (!th.empty()) {
    const int given = static_cast<int>(th.contains("beta")) + static_cast<int>(th.contains("T")) +
                      static_cast<int>(th.contains("lambda"));
    if (given != 1) config_error("thermal", "exactly one of beta, T and lambda is required");
    if (th.contains("beta")) c.beta = get_number(th, "thermal", "beta");
    if (th.contains("T")) {
      const double T = get_number(th, "thermal", "T");
      if (!(T > 0.0)) config_error("thermal.T", "must be positive");
      c.beta = 1.0 / (c.units.kB * T);
    }
    if (th.contains("lambda")) {
      const double lam = get_number(th, "thermal", "lambda");
      if (!(lam > 0.0)) config_error("thermal.lambda", "must be positive");
      c.beta = ThermalParams::from_lambda(lam, c.units).beta();
    }
    if (!(*c.beta > 0.0)) config_error("thermal.beta", "must be positive");
  }

  if (doc.contains("statistics")) {
    if (!doc.at("statistics").is_string()) config_error("statistics", "expected a string");
    try {
      c.stats = parse_statistics(doc.at("statistics").get<std::string>());
    } catch (const Error& e) {
      config_error("statistics", "expected boltzmann, bose or fermi");
    }
  }
  if (doc.contains("e_max")) {
    c.e_max = as_number(doc.at("e_max"), "e_max");
    if (!(*c.e_max >= 0.0)) config_error("e_max", "must be >= 0");
  }
  const auto& tol = get_block(doc, "tolerances");
  c.tol = get_number_or(tol, "tolerances", "psd", 1e-10);
  if (!(c.tol > 0.0)) config_error("tolerances.psd", "must be positive");
  for (const auto& [key, value] : tol.items())
    if (!(as_number(value, "tolerances." + key) > 0.0)) config_error("tolerances." + key, "must be positive");

  const auto& out = get_block(doc, "output");
  if (out.contains("format")) {
    const auto f = out.at("format").is_string() ? out.at("format").get<std::string>() : std::string();
    if (f == "csv") c.format = OutputFormat::Csv;
    else if (f == "json") c.format = OutputFormat::Json;
    else config_error("output.format", "expected csv or json");
  }
  if (out.contains("path")) {
    if (!out.at("path").is_string()) config_error("output.path", "expected a string");
    c.out_path = out.at("path").get<std::string>();
  }
  if (doc.contains("threads")) {
    const auto t = as_int(doc.at("threads"), "threads");
    if (t < 1 || t > 256) config_error("threads", "must lie in [1, 256]");
    c.threads = static_cast<unsigned>(t);
  }
  return c;
}

ThermalParams RunConfig::thermal() const {
  if (!beta) config_error("thermal", "missing thermal block (beta, T or lambda)");
  return ThermalParams(*beta, units);
}

BoxGeometry RunConfig::geometry_at(double side) const {
  if (N) return BoxGeometry(dim, side, *N);
  if (!rho) config_error("geometry", "missing geometry block");
  try {
    return BoxGeometry::from_density(dim, side, *rho);
  } catch (const Error& e) {
    config_error("geometry.rho", e.what());
  }
}

BoxGeometry RunConfig::geometry() const {
  if (!L) config_error("geometry.L", "this command needs a single L");
  return geometry_at(*L);
}

std::vector<double> RunConfig::sides() const {
  if (L) return {*L};
  if (L_grid.empty()) config_error("geometry", "missing geometry block");
  return L_grid;
}

double RunConfig::require_e_max() const {
  if (!e_max) config_error("e_max", "missing required field");
  return *e_max;
}

ordered_json RunConfig::echo() const {
  ordered_json e = doc;
  e.erase("threads");
  if (e.contains("output") && e["output"].is_object()) e["output"].erase("path");
  return e;
}

}  // namespace totmom::app
