#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "totmom/totmom.h"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

int report(int code, const std::string& msg) {
  std::string line = msg;
  for (char& c : line)
    if (c == '\n' || c == '\r') c = ' ';
  std::cerr << "error[" << totmom_error_name(code) << "]: " << line << "\n";
  return code == TOTMOM_E_CONFIG ? kExitConfig : kExitRuntime;
}

struct Flags {
  std::string config;
  std::optional<std::string> format, out, units;
  std::optional<double> tol, emax;
  std::optional<unsigned> threads;
};

std::string overrides_json(const Flags& f) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  if (f.format) j["format"] = *f.format;
  if (f.out) j["out"] = *f.out;
  if (f.tol) j["tol"] = *f.tol;
  if (f.emax) j["emax"] = *f.emax;
  if (f.units) j["units"] = *f.units;
  if (f.threads) j["threads"] = *f.threads;
  return j.dump();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Total-momentum distributions of ideal quantum gases on periodic boxes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(totmom_version()));
  Flags flags;
  const char* names[] = {"dist", "bounds", "clt", "com", "measure", "twofluid", "landau", "selftest"};
  const char* about[] = {"momentum distribution and Gamma curve",
                         "partition-function ratio against its bounds",
                         "one-dimensional central-limit convergence",
                         "center-of-mass kernel, positivity and macroscopic wave function",
                         "measure-limit families and two-fluid weights",
                         "critical velocity and heating model",
                         "Landau excitability and boost-set checks",
                         "fixed configurations through every command"};
  for (int i = 0; i < 8; ++i) {
    auto* sub = app.add_subcommand(names[i], about[i]);
    sub->add_option("--config", flags.config, "JSON configuration file");
    sub->add_option("--format", flags.format, "csv or json");
    sub->add_option("--out", flags.out, "output file (stdout when absent)");
    sub->add_option("--tol", flags.tol, "positivity tolerance");
    sub->add_option("--emax", flags.emax, "spectral cutoff");
    sub->add_option("--units", flags.units, "natural or si");
    sub->add_option("--threads", flags.threads, "worker threads");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report(TOTMOM_E_CONFIG, e.what());
  }
  const std::string command = app.get_subcommands().front()->get_name();

  std::string config = "{}";
  if (!flags.config.empty()) {
    std::ifstream in(flags.config, std::ios::binary);
    if (!in) return report(TOTMOM_E_CONFIG, "--config: cannot read " + flags.config);
    std::ostringstream ss;
    ss << in.rdbuf();
    config = ss.str();
  }

  char* output = nullptr;
  char* out_path = nullptr;
  const int rc = totmom_run_command(command.c_str(), config.c_str(), overrides_json(flags).c_str(), &output, &out_path);
  if (rc != TOTMOM_OK) return report(rc, totmom_last_error());
  const std::string text = output;
  totmom_string_free(output);
  int status = 0;
  if (out_path) {
    const std::string path = out_path;
    totmom_string_free(out_path);
    std::ofstream os(path, std::ios::binary);
    os << text;
    os.close();
    if (!os) status = report(TOTMOM_E_IO, "--out: cannot write " + path);
  } else {
    std::fwrite(text.data(), 1, text.size(), stdout);
  }
  return status;
}
