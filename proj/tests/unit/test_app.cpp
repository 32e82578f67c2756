#include <doctest.h>

#include <cmath>
#include <string>

#include <json.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "error.hpp"
#include "numeric.hpp"

using namespace totmom;
using namespace totmom::app;
using nlohmann::json;

namespace {

const char* kToyDist = R"({"geometry":{"d":1,"L":6.283185307179586,"N":2},"thermal":{"beta":1},"statistics":"bose","e_max":1})";

std::string config_message(const std::string& text, const Overrides& ov = {}) {
  try {
    parse_config(text, ov);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Config);
    return e.what();
  }
  return "";
}

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

}  // namespace

TEST_CASE("config errors name the field") {
  CHECK(starts_with(config_message("{"), "config:"));
  CHECK(starts_with(config_message(R"({"geometry":{"d":1,"L":1,"N":2,"rho":1}})"), "geometry.N:"));
  CHECK(starts_with(config_message(R"({"geometry":{"d":1,"N":2}})"), "geometry.L:"));
  CHECK(starts_with(config_message(R"({"geometry":{"d":4,"L":1,"N":2}})"), "geometry.d:"));
  CHECK(starts_with(config_message(R"({"geometry":{"d":1,"L_grid":[2,1],"N":2}})"), "geometry.L_grid:"));
  CHECK(starts_with(config_message(R"({"thermal":{"beta":1,"T":2}})"), "thermal:"));
  CHECK(starts_with(config_message(R"({"statistics":"anyon"})"), "statistics:"));
  CHECK(starts_with(config_message(R"({"tolerances":{"psd":-1}})"), "tolerances.psd:"));
  CHECK(starts_with(config_message(R"({"output":{"format":"xml"}})"), "output.format:"));
  CHECK(starts_with(config_message(R"({"units":"imperial"})"), "units:"));
  CHECK(starts_with(config_message(R"({"e_max":"big"})"), "e_max:"));
}

TEST_CASE("overrides win over the file") {
  Overrides ov = parse_overrides(R"({"format":"csv","emax":7,"tol":1e-6,"units":"si","threads":3})");
  auto c = parse_config(R"({"e_max":2,"output":{"format":"json"},"tolerances":{"psd":1e-9}})", ov);
  CHECK(c.format == OutputFormat::Csv);
  CHECK(*c.e_max == 7.0);
  CHECK(c.tol == 1e-6);
  CHECK(c.units.mass == Units::si_helium4().mass);
  CHECK(c.threads == 3);
  auto echo = c.echo();
  CHECK_FALSE(echo.contains("threads"));
  CHECK(echo["e_max"] == 7.0);
}

TEST_CASE("thermal block variants") {
  auto b = parse_config(R"({"thermal":{"beta":2}})");
  CHECK(b.thermal().beta() == 2.0);
  auto t = parse_config(R"({"thermal":{"T":4}})");
  CHECK(t.thermal().beta() == doctest::Approx(0.25));
  auto l = parse_config(R"({"thermal":{"lambda":1}})");
  CHECK(l.thermal().lambda() == doctest::Approx(1.0).epsilon(1e-15));
  auto rho = parse_config(R"({"geometry":{"d":2,"L":3,"rho":2}})");
  CHECK(rho.geometry().particles() == 18);
}

TEST_CASE("dist reproduces the toy table") {
  auto out = json::parse(run_command("dist", kToyDist).text);
  CHECK(out["command"] == "dist");
  CHECK(out["config"]["e_max"] == 1);
  auto& r = out["result"];
  const double e = std::exp(-0.5), e1 = std::exp(-1.0);
  const double Z = 1 + e1 + 2 * e + 2 * e1;
  double nu0 = 0, nu1 = 0, nu2 = 0;
  for (auto& row : r["nu"]) {
    const int q = row["Q"][0];
    if (q == 0) nu0 = row["nu"];
    if (q == 1) nu1 = row["nu"];
    if (q == 2) nu2 = row["nu"];
  }
  // e_max = 1 leaves a large certified tail, so nu is the table law scaled by 1 - deficit
  const double kept = nu0 + 2 * nu1 + 2 * nu2;
  CHECK(kept + double(r["deficit"]) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(nu0 / kept == doctest::Approx((1 + e1) / Z).epsilon(1e-14));
  CHECK(nu1 / kept == doctest::Approx(e / Z).epsilon(1e-14));
  CHECK(nu2 / kept == doctest::Approx(e1 / Z).epsilon(1e-14));
  CHECK(double(r["Z"]) == doctest::Approx(Z).epsilon(1e-14));
}

TEST_CASE("dist for one particle is the Gibbs law") {
  auto out = json::parse(
      run_command("dist", R"({"geometry":{"d":1,"L":6.283185307179586,"N":1},"thermal":{"beta":0.5},"statistics":"fermi","e_max":200})")
          .text);
  long double z = 0;
  for (int k = -40; k <= 40; ++k) z += std::exp(-0.25L * k * k);
  for (auto& row : out["result"]["nu"]) {
    const int q = row["Q"][0];
    CHECK(double(row["nu"]) == doctest::Approx(static_cast<double>(std::exp(-0.25L * q * q) / z)).epsilon(1e-12));
  }
}

TEST_CASE("csv output carries the config header") {
  Overrides ov;
  ov.format = "csv";
  auto text = run_command("dist", kToyDist, ov).text;
  CHECK(starts_with(text, "# command: dist\n# config: {"));
  CHECK(text.find("# section: nu\nQ1,nu\n") != std::string::npos);
  CHECK(text.find("# section: gamma\nkappa,gamma\n") != std::string::npos);
}

TEST_CASE("bounds rows") {
  auto one = json::parse(run_command("bounds",
                                     R"({"geometry":{"d":1,"L_grid":[2,4,8],"N":2},"thermal":{"beta":1},"statistics":"bose","e_max":60})")
                             .text);
  for (auto& row : one["result"]["rows"]) CHECK(row["contained"] == true);
  auto two = json::parse(run_command("bounds",
                                     R"({"geometry":{"d":2,"L_grid":[2,4],"rho":0.5},"thermal":{"beta":1},"statistics":"boltzmann","e_max":12})")
                             .text);
  auto& rows = two["result"]["rows"];
  CHECK(rows[0]["lower"] == rows[1]["lower"]);
  CHECK(rows[0]["upper"] == rows[1]["upper"]);
}

TEST_CASE("twofluid with helium units") {
  auto out = json::parse(run_command("twofluid", R"({"units":"si","twofluid":{"T":0,"T_s":2.17,"eta":1}})").text);
  const double v = out["result"]["v_cr"];
  CHECK(std::abs(v - 67.1) / 67.1 < 0.01);
  CHECK(double(out["result"]["steady_temperature_at_v_cr"]) == doctest::Approx(2.17).epsilon(1e-12));
}

TEST_CASE("measure crystal demo") {
  auto out = json::parse(run_command(
      "measure",
      R"({"measure":{"family":{"kind":"crystal","points":[[0],[6.283185307179586],[-6.283185307179586]],"weights":[0.5,0.25,0.25]}}})")
                             .text);
  CHECK(double(out["result"]["report"]["gamma_inf"]) < 0.02);
  CHECK_THROWS_AS(run_command("measure", R"({"measure":{"family":{"kind":"crystal","points":[[1]],"weights":[1]}}})"), Error);
}

TEST_CASE("landau identity at zero boost") {
  auto out = json::parse(run_command(
      "landau",
      R"({"geometry":{"d":1,"L":6.283185307179586,"N":2},"statistics":"bose","e_max":12,"landau":{"dispersion":{"kind":"phonon","c":1.5},"v":[1,0,0]}})")
                             .text);
  auto& chk = out["result"]["boost_set_checks"][0];
  CHECK(chk["identity"] == true);
  CHECK(chk["multiset_equal"] == true);
  CHECK(double(out["result"]["landau_velocity"]) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(out["result"]["excitable"] == false);
}

TEST_CASE("com command round trips the velocity") {
  auto out = json::parse(run_command(
      "com",
      R"({"geometry":{"d":1,"L":6.283185307179586,"N":2},"thermal":{"beta":1},"statistics":"bose","e_max":12,"com":{"boost":[2]}})")
                             .text);
  auto& r = out["result"];
  CHECK(r["psd_nu"]["pass"] == true);
  CHECK(r["psd_n_k"]["pass"] == true);
  CHECK(double(r["recovered_velocity"][0]) == doctest::Approx(double(r["velocity"][0])).epsilon(1e-10));
}

TEST_CASE("unknown command") {
  CHECK_THROWS_AS(run_command("plot", "{}"), Error);
}

TEST_CASE("output is independent of the thread count") {
  Overrides one, four;
  one.threads = 1;
  four.threads = 4;
  const char* cfg = R"({"geometry":{"d":1,"L":1,"rho":1},"thermal":{"lambda":1},"statistics":"bose","clt":{"N":[2,4,8]}})";
  CHECK(run_command("clt", cfg, one).text == run_command("clt", cfg, four).text);
}
