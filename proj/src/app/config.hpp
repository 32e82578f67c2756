#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lattice.hpp"
#include "spectrum.hpp"
#include "theta.hpp"

namespace totmom::app {

enum class OutputFormat { Csv, Json };

// Validated run configuration. The raw document is kept so that every command
// can echo the effective configuration and read its own block.
struct RunConfig {
  nlohmann::ordered_json doc;

  std::string units_label = "natural";
  Units units;
  int dim = 1;
  std::optional<double> L;
  std::vector<double> L_grid;
  std::optional<std::int64_t> N;
  std::optional<double> rho;
  std::optional<double> beta;
  Statistics stats = Statistics::Bose;
  std::optional<double> e_max;
  double tol = 1e-10;
  OutputFormat format = OutputFormat::Json;
  std::string out_path;
  unsigned threads = 1;

  bool has_thermal() const noexcept { return beta.has_value(); }
  ThermalParams thermal() const;
  // Geometry at a single L (the configured one, or an entry of L_grid).
  BoxGeometry geometry_at(double side) const;
  BoxGeometry geometry() const;
  std::vector<double> sides() const;
  double require_e_max() const;

  // Effective configuration without execution-only settings (threads, output path).
  nlohmann::ordered_json echo() const;
};

// Command-line style overrides applied before validation; flags win over the file.
struct Overrides {
  std::optional<std::string> format;
  std::optional<std::string> out;
  std::optional<double> tol;
  std::optional<double> emax;
  std::optional<std::string> units;
  std::optional<unsigned> threads;
};

Overrides parse_overrides(const std::string& json_text);
RunConfig parse_config(const std::string& json_text, const Overrides& ov = {});

// Helpers for reading command blocks; failures name the field and raise config errors.
double get_number(const nlohmann::ordered_json& obj, const std::string& path, const std::string& key);
double get_number_or(const nlohmann::ordered_json& obj, const std::string& path, const std::string& key, double fallback);
std::int64_t get_int(const nlohmann::ordered_json& obj, const std::string& path, const std::string& key);
std::int64_t get_int_or(const nlohmann::ordered_json& obj, const std::string& path, const std::string& key, std::int64_t fallback);
std::vector<double> get_numbers(const nlohmann::ordered_json& obj, const std::string& path, const std::string& key);
const nlohmann::ordered_json& get_block(const nlohmann::ordered_json& doc, const std::string& key);

[[noreturn]] void config_error(const std::string& field, const std::string& what);

}  // namespace totmom::app
