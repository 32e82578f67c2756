#include "commands.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "asymptotics.hpp"
#include "com.hpp"
#include "error.hpp"
#include "measure.hpp"
#include "numeric.hpp"
#include "spectrum.hpp"
#include "theta.hpp"
#include "twofluid.hpp"

namespace totmom::app {

using nlohmann::ordered_json;

namespace {

struct CsvSection {
  std::string name;
  std::string body;  // header line plus rows
};

struct Result {
  ordered_json json = ordered_json::object();
  std::vector<CsvSection> csv;
};

std::vector<std::int64_t> coords(const DualVector& q) { return {q.n.begin(), q.n.begin() + q.dim}; }

std::string q_header(int dim) {
  static const char* names[] = {"Q1", "Q2", "Q3"};
  std::string s;
  for (int i = 0; i < dim; ++i) s += std::string(i ? "," : "") + names[i];
  return s;
}

std::string q_cells(const DualVector& q) {
  std::string s;
  for (int i = 0; i < q.dim; ++i) s += (i ? "," : "") + std::to_string(q[i]);
  return s;
}

std::string fmt(double x) { return format_double(x); }

DualVector parse_dual(const ordered_json& j, int dim, const std::string& field) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) config_error(field, "expected " + std::to_string(dim) + " integers");
  DualVector q = DualVector::zero(dim);
  for (int i = 0; i < dim; ++i) {
    if (!j[static_cast<std::size_t>(i)].is_number_integer()) config_error(field, "expected integers");
    q[i] = j[static_cast<std::size_t>(i)].get<std::int64_t>();
  }
  return q;
}

Point parse_point(const ordered_json& j, const std::string& field) {
  if (!j.is_array() || j.empty() || j.size() > 3) config_error(field, "expected 1 to 3 numbers");
  Point p{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) config_error(field, "expected numbers");
    p[i] = j[i].get<double>();
  }
  return p;
}

std::vector<double> kappa_curve(const MomentumDistribution& d) {
  std::int64_t mmax = 0;
  for (const auto& q : d.support) mmax = std::max(mmax, q.max_norm());
  std::vector<double> ks;
  for (std::int64_t n = 0; n <= mmax; ++n) ks.push_back(2.0 * kPi * static_cast<double>(n) / d.side);
  return ks;
}

Result cmd_dist(const RunConfig& cfg) {
  const BoxGeometry geom = cfg.geometry();
  const ThermalParams th = cfg.thermal();
  const SpectralTable table = enumerate_spectrum(geom, cfg.stats, cfg.require_e_max(), th);
  const PartitionFunctions pf = partition_functions(table, th);
  const MomentumDistribution nu = nu_distribution(table, th);
  const RatioBounds rb = ratio_bounds(geom, th);
  const GalileanReport gal = galilean_check(table);
  Result r;
  auto& j = r.json;
  j["statistics"] = statistics_name(cfg.stats);
  j["N"] = geom.particles();
  j["L"] = geom.side();
  j["levels"] = table.level_count();
  j["Z"] = pf.Z;
  j["Z_irred"] = pf.Z_irred;
  j["Z_over_Z_irred"] = pf.ratio();
  j["ratio_bounds"] = {{"lower", rb.lower}, {"upper", rb.upper}};
  j["gamma_at_pi_N_over_L"] = gamma_cdf(nu, kPi * static_cast<double>(geom.particles()) / geom.side());
  j["Z_irred_over_Z"] = 1.0 / pf.ratio();
  j["deficit"] = nu.deficit;
  j["galilean_residual"] = gal.max_residual;
  auto rows = ordered_json::array();
  std::string csv = q_header(geom.dim()) + ",nu\n";
  for (std::size_t i = 0; i < nu.size(); ++i) {
    rows.push_back({{"Q", coords(nu.support[i])}, {"nu", nu.weights[i]}});
    csv += q_cells(nu.support[i]) + "," + fmt(nu.weights[i]) + "\n";
  }
  j["nu"] = std::move(rows);
  auto curve = ordered_json::array();
  std::string gcsv = "kappa,gamma\n";
  for (double k : kappa_curve(nu)) {
    const double g = gamma_cdf(nu, k);
    curve.push_back({{"kappa", k}, {"gamma", g}});
    gcsv += fmt(k) + "," + fmt(g) + "\n";
  }
  j["gamma_curve"] = std::move(curve);
  r.csv.push_back({"nu", csv});
  r.csv.push_back({"gamma", gcsv});
  r.csv.push_back({"summary", "Z,Z_irred,deficit,lower,ratio,upper\n" + fmt(pf.Z) + "," + fmt(pf.Z_irred) + "," +
                                  fmt(nu.deficit) + "," + fmt(rb.lower) + "," + fmt(pf.ratio()) + "," + fmt(rb.upper) + "\n"});
  return r;
}

Result cmd_bounds(const RunConfig& cfg) {
  const ThermalParams th = cfg.thermal();
  const double e_max = cfg.require_e_max();
  Result r;
  auto rows = ordered_json::array();
  std::string csv = "L,lower,ratio,upper,ratio_gauss,gamma_irred,contained\n";
  for (double side : cfg.sides()) {
    const BoxGeometry geom = cfg.geometry_at(side);
    const SpectralTable table = enumerate_spectrum(geom, cfg.stats, e_max, th);
    const PartitionFunctions pf = partition_functions(table, th);
    const double gauss = average_ratio(table, geom, th);
    const RatioBounds rb = ratio_bounds(geom, th);
    const bool contained = rb.lower <= pf.ratio() && pf.ratio() <= rb.upper && rb.lower <= gauss && gauss <= rb.upper;
    rows.push_back({{"L", side}, {"N", geom.particles()}, {"lower", rb.lower}, {"ratio", pf.ratio()}, {"upper", rb.upper},
                    {"ratio_gauss", gauss}, {"gamma_irred", 1.0 / pf.ratio()}, {"contained", contained}});
    csv += fmt(side) + "," + fmt(rb.lower) + "," + fmt(pf.ratio()) + "," + fmt(rb.upper) + "," + fmt(gauss) + "," +
           fmt(1.0 / pf.ratio()) + "," + (contained ? "true" : "false") + "\n";
  }
  r.json["rows"] = std::move(rows);
  r.csv.push_back({"bounds", csv});
  return r;
}

Result cmd_clt(const RunConfig& cfg) {
  const ThermalParams th = cfg.thermal();
  const auto& blk = get_block(cfg.doc, "clt");
  std::vector<BoxGeometry> geoms;
  if (cfg.dim != 1) config_error("geometry.d", "clt needs d = 1");
  if (blk.contains("N")) {
    if (!cfg.rho) config_error("geometry.rho", "clt with an N list needs rho");
    for (double n : get_numbers(blk, "clt", "N")) {
      if (n < 1 || n != std::round(n)) config_error("clt.N", "entries must be positive integers");
      geoms.emplace_back(1, n / *cfg.rho, static_cast<std::int64_t>(n));
    }
  } else {
    for (double side : cfg.sides()) geoms.push_back(cfg.geometry_at(side));
  }
  const CltReport rep = clt_convergence_report(geoms, cfg.stats, th);
  Result r;
  r.json = ordered_json::parse(rep.to_json());
  r.csv.push_back({"clt", rep.to_csv()});
  return r;
}

Result cmd_com(const RunConfig& cfg) {
  const BoxGeometry geom = cfg.geometry();
  const ThermalParams th = cfg.thermal();
  const double e_max = cfg.require_e_max();
  const auto& blk = get_block(cfg.doc, "com");
  const double x_max = get_number_or(blk, "com", "x_max", 0.5 * geom.side());
  const auto points = get_int_or(blk, "com", "points", 33);
  const auto radius = get_int_or(blk, "com", "psd_radius", 2);
  if (points < 2 || points > 100000) config_error("com.points", "must lie in [2, 100000]");
  if (radius < 0 || radius > 6) config_error("com.psd_radius", "must lie in [0, 6]");
  DualVector k = DualVector::zero(geom.dim());
  if (blk.contains("boost")) k = parse_dual(blk.at("boost"), geom.dim(), "com.boost");
  const double rho = get_number_or(blk, "com", "rho", geom.density());

  const SpectralTable table = enumerate_spectrum(geom, cfg.stats, e_max, th);
  const MomentumDistribution nu = nu_distribution(table, th);
  Point axis{0.0, 0.0, 0.0};
  axis[0] = 1.0;
  const auto xs = line_points(geom.dim(), Point{0.0, 0.0, 0.0}, axis, x_max / static_cast<double>(points - 1),
                              static_cast<std::size_t>(points));
  const KernelSamples f = com_kernel(nu, xs);
  const auto samples = box_window(geom.dim(), radius);
  const PsdReport psd_nu = psd_check(nu, samples, PsdOptions{cfg.tol, false});
  const LatticeDistribution nk = occupation_expectation(geom, cfg.stats, th, e_max);
  const PsdReport psd_nk = psd_check(nk, samples, PsdOptions{cfg.tol, false});

  Result r;
  auto& j = r.json;
  j["kernel"] = ordered_json::parse(f.to_json());
  j["psd_nu"] = ordered_json::parse(psd_nu.to_json());
  j["psd_n_k"] = ordered_json::parse(psd_nk.to_json());
  const Point v = lattice_velocity(k, geom, cfg.units);
  j["boost"] = coords(k);
  j["velocity"] = std::vector<double>(v.begin(), v.begin() + geom.dim());
  try {
    Point dir{0.0, 0.0, 0.0};
    double len = 0.0;
    for (int i = 0; i < geom.dim(); ++i) len += static_cast<double>(k[i] * k[i]);
    if (len > 0.0) {
      for (int i = 0; i < geom.dim(); ++i) dir[static_cast<std::size_t>(i)] = static_cast<double>(k[i]) / std::sqrt(len);
    } else {
      dir = axis;
    }
    // keep the phase step per sample well below pi
    const double kmag = std::sqrt(len) * geom.dual_spacing();
    double step = geom.side() / 64.0;
    if (kmag > 0.0) step = std::min(step, 0.5 / (static_cast<double>(geom.particles()) * kmag));
    const auto line = line_points(geom.dim(), Point{0.0, 0.0, 0.0}, dir, step, 17);
    const KernelSamples psi = macroscopic_wavefunction(nu, v, th, geom, rho, line);
    const Point back = velocity_from_phase(psi, geom.particles(), cfg.units);
    j["wavefunction"] = ordered_json::parse(psi.to_json());
    j["recovered_velocity"] = std::vector<double>(back.begin(), back.begin() + geom.dim());
  } catch (const Error& e) {
    j["wavefunction_error"] = {{"code", error_code_name(e.code())}, {"message", e.what()}};
  }
  r.csv.push_back({"kernel", f.to_csv()});
  r.csv.push_back({"psd", "matrix,n,min_eigenvalue,tolerance,pass\nnu," + std::to_string(psd_nu.samples.size()) + "," +
                              fmt(psd_nu.min_eigenvalue) + "," + fmt(psd_nu.tolerance) + "," + (psd_nu.pass ? "true" : "false") +
                              "\nn_k," + std::to_string(psd_nk.samples.size()) + "," + fmt(psd_nk.min_eigenvalue) + "," +
                              fmt(psd_nk.tolerance) + "," + (psd_nk.pass ? "true" : "false") + "\n"});
  return r;
}

FamilyParams parse_family(const ordered_json& fj, FamilyKind& kind) {
  if (!fj.is_object()) config_error("measure.family", "expected an object");
  if (!fj.contains("kind") || !fj.at("kind").is_string()) config_error("measure.family.kind", "missing required field");
  try {
    kind = parse_family_kind(fj.at("kind").get<std::string>());
  } catch (const Error&) {
    config_error("measure.family.kind", "expected crystal, normal_fluid, superfluid, bec_gas or escaping");
  }
  FamilyParams p;
  p.dim = static_cast<int>(get_int_or(fj, "measure.family", "dim", 1));
  p.nu0 = get_number_or(fj, "measure.family", "nu0", 0.0);
  p.gamma_inf = get_number_or(fj, "measure.family", "gamma_inf", 0.0);
  p.width = get_number_or(fj, "measure.family", "width", 1.0);
  p.rho = get_number_or(fj, "measure.family", "rho", 1.0);
  p.escape_scale = get_number_or(fj, "measure.family", "escape_scale", 8.0);
  if (fj.contains("points")) {
    const auto& pts = fj.at("points");
    if (!pts.is_array()) config_error("measure.family.points", "expected an array of points");
    for (std::size_t i = 0; i < pts.size(); ++i) p.points.push_back(parse_point(pts[i], "measure.family.points"));
    p.weights = get_numbers(fj, "measure.family", "weights");
  }
  return p;
}

Result cmd_measure(const RunConfig& cfg) {
  const auto& blk = get_block(cfg.doc, "measure");
  if (!blk.contains("family")) config_error("measure.family", "missing required field");
  FamilyKind kind = FamilyKind::Crystal;
  const FamilyParams params = parse_family(blk.at("family"), kind);
  MeasureFamily fam;
  try {
    fam = example_family(kind, params);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidParams) config_error("measure.family", e.what());
    throw;
  }
  std::vector<double> L_grid = blk.contains("L_grid") ? get_numbers(blk, "measure", "L_grid")
                                                      : std::vector<double>{64, 128, 256, 512, 1024};
  std::vector<double> kgrid;
  if (blk.contains("kappa_grid")) {
    kgrid = get_numbers(blk, "measure", "kappa_grid");
  } else {
    // wide enough to cover the Gaussian core and every crystal point
    double reach = 0.0;
    for (const Point& p : params.points) reach = std::max(reach, std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]));
    const double kmax = get_number_or(blk, "measure", "kappa_max", 6.0 + reach);
    const auto n = get_int_or(blk, "measure", "kappa_points", 61);
    if (!(kmax > 0.0) || n < 2) config_error("measure.kappa_max", "need kappa_max > 0 and kappa_points >= 2");
    for (std::int64_t i = 0; i < n; ++i) kgrid.push_back(kmax * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  const double far_x = get_number_or(blk, "measure", "far_x", 20.0);
  const double lambda = get_number_or(blk, "measure", "lambda", 0.2);
  LimitReport rep;
  try {
    rep = gamma_limit_report(fam, L_grid, kgrid, far_x);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument) config_error("measure", e.what());
    throw;
  }
  const MollifiedValue mol = mollified_limit(fam, lambda, Point{0.0, 0.0, 0.0}, {L_grid.back()});
  const TwoFluidWeights w = two_fluid_weights(rep);
  const AtomicMeasure top = fam.generate(L_grid.back());
  Result r;
  auto& j = r.json;
  j["family"] = family_kind_name(kind);
  j["report"] = ordered_json::parse(rep.to_json());
  j["mollified"] = {{"lambda", lambda}, {"x", 0.0}, {"L", L_grid.back()}, {"value", mol.value}};
  j["two_fluid_weights"] = {{"nu0", w.nu0}, {"continuous_mass", w.continuous_mass}, {"infinity_mass", w.infinity_mass}};
  auto sig = ordered_json::array();
  std::string scsv = "n,sigma,gamma\n";
  for (int n : {1, 2, 4, 8, 16, 32}) {
    const double s = sigma_L(top, n);
    const double g = gamma_L(top, 2.0 * kPi * n / top.side);
    sig.push_back({{"n", n}, {"sigma", s}, {"gamma", g}});
    scsv += std::to_string(n) + "," + fmt(s) + "," + fmt(g) + "\n";
  }
  j["sigma_vs_gamma"] = std::move(sig);
  const auto profile_pts = get_int_or(blk, "measure", "profile_points", 41);
  const double profile_x = get_number_or(blk, "measure", "profile_x", 2.0);
  if (profile_pts >= 2) {
    Point axis{1.0, 0.0, 0.0};
    const auto xs = line_points(top.dim, Point{0.0, 0.0, 0.0}, axis, profile_x / static_cast<double>(profile_pts - 1),
                                static_cast<std::size_t>(profile_pts));
    const KernelSamples f = fourier_transform(top, xs);
    j["profile"] = ordered_json::parse(f.to_json());
    r.csv.push_back({"profile", f.to_csv()});
  }
  r.csv.insert(r.csv.begin(), {"gamma", rep.to_csv()});
  r.csv.push_back({"sigma", scsv});
  r.csv.push_back({"weights", "gamma_finite,gamma_inf,nu0,continuous_mass,infinity_mass,mollified\n" + fmt(rep.gamma_finite) +
                                  "," + fmt(rep.gamma_inf) + "," + fmt(w.nu0) + "," + fmt(w.continuous_mass) + "," +
                                  fmt(w.infinity_mass) + "," + fmt(mol.value) + "\n"});
  return r;
}

Result cmd_twofluid(const RunConfig& cfg) {
  const auto& blk = get_block(cfg.doc, "twofluid");
  FlowParams fp;
  fp.T = get_number_or(blk, "twofluid", "T", 0.0);
  fp.T_s = get_number(blk, "twofluid", "T_s");
  fp.eta = get_number_or(blk, "twofluid", "eta", 1.0);
  fp.v = get_number_or(blk, "twofluid", "v", 0.0);
  fp.mass = get_number_or(blk, "twofluid", "mass", cfg.units.mass);
  fp.kB = cfg.units.kB;
  try {
    fp.validate();
  } catch (const Error& e) {
    config_error("twofluid", e.what());
  }
  std::vector<std::pair<double, double>> schedule{{0.0, 1.0}, {1.0, 0.75}, {2.0, 0.5}, {3.0, 0.25}, {4.0, 0.0}};
  if (blk.contains("schedule")) {
    schedule.clear();
    const auto& s = blk.at("schedule");
    if (!s.is_array()) config_error("twofluid.schedule", "expected an array of [t, alpha] pairs");
    for (const auto& row : s) {
      if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number())
        config_error("twofluid.schedule", "expected [t, alpha] pairs");
      schedule.emplace_back(row[0].get<double>(), row[1].get<double>());
    }
  }
  const double vcr = critical_velocity(fp);
  FlowParams at_cr = fp;
  at_cr.v = vcr;
  const RelaxationSeries series = relaxation_series(fp, schedule);
  const auto curve_points = get_int_or(blk, "twofluid", "curve_points", 11);
  const std::string curve = critical_velocity_curve_csv(fp, get_number_or(blk, "twofluid", "T_min", 0.0),
                                                        static_cast<int>(curve_points));
  Result r;
  auto& j = r.json;
  j["v_cr"] = vcr;
  j["steady_temperature"] = steady_temperature(fp);
  j["steady_temperature_at_v_cr"] = steady_temperature(at_cr);
  j["T_s"] = fp.T_s;
  auto steps = ordered_json::array();
  for (const auto& s : series.steps)
    steps.push_back({{"t", s.t}, {"alpha", s.alpha}, {"T_t", s.T_t}, {"state", s.collapsed ? "normal" : "superfluid"}});
  j["relaxation"] = std::move(steps);
  j["first_collapse"] = series.first_collapse ? ordered_json(*series.first_collapse) : ordered_json(nullptr);
  auto crv = ordered_json::array();
  std::istringstream is(curve);
  std::string line;
  std::getline(is, line);
  while (std::getline(is, line)) {
    const auto comma = line.find(',');
    crv.push_back({{"T", std::stod(line.substr(0, comma))}, {"v_cr", std::stod(line.substr(comma + 1))}});
  }
  j["v_cr_curve"] = std::move(crv);
  r.csv.push_back({"summary", "v_cr,T_v,T_v_at_v_cr,T_s\n" + fmt(vcr) + "," + fmt(steady_temperature(fp)) + "," +
                                  fmt(steady_temperature(at_cr)) + "," + fmt(fp.T_s) + "\n"});
  r.csv.push_back({"relaxation", series.to_csv()});
  r.csv.push_back({"v_cr_curve", curve});
  return r;
}

Result cmd_landau(const RunConfig& cfg) {
  const auto& blk = get_block(cfg.doc, "landau");
  ModelDispersion disp;
  disp.hbar = cfg.units.hbar;
  const auto& dj = get_block(blk, "dispersion");
  try {
    disp.kind = parse_dispersion_kind(dj.contains("kind") ? dj.at("kind").get<std::string>() : "phonon");
  } catch (const Error& e) {
    config_error("landau.dispersion.kind", e.what());
  }
  disp.c = get_number_or(dj, "landau.dispersion", "c", 1.0);
  disp.Delta = get_number_or(dj, "landau.dispersion", "Delta", 0.0);
  disp.mu = get_number_or(dj, "landau.dispersion", "mu", 1.0);
  disp.q_r = get_number_or(dj, "landau.dispersion", "q_r", 0.0);
  if (dj.contains("table")) {
    for (const auto& row : dj.at("table")) {
      if (!row.is_array() || row.size() != 2) config_error("landau.dispersion.table", "expected [q, eps] pairs");
      disp.table.emplace_back(row[0].get<double>(), row[1].get<double>());
    }
  }
  try {
    disp.validate();
  } catch (const Error& e) {
    config_error("landau.dispersion", e.what());
  }
  Point v{0.0, 0.0, 0.0};
  if (blk.contains("v")) v = parse_point(blk.at("v"), "landau.v");
  const double q_max = get_number_or(blk, "landau", "q_max", 5.0);
  const auto q_points = get_int_or(blk, "landau", "q_points", 101);
  if (!(q_max > 0.0) || q_points < 2) config_error("landau.q_max", "need q_max > 0 and q_points >= 2");
  const double speed = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  Point dir{1.0, 0.0, 0.0};
  if (speed > 0.0) dir = Point{v[0] / speed, v[1] / speed, v[2] / speed};
  const double lo = disp.kind == DispersionKind::Tabulated ? 0.0 : -q_max;
  std::vector<Point> grid;
  for (std::int64_t i = 0; i < q_points; ++i) {
    const double s = lo + (q_max - lo) * static_cast<double>(i) / static_cast<double>(q_points - 1);
    grid.push_back(Point{s * dir[0], s * dir[1], s * dir[2]});
  }
  const LandauResult lr = landau_excitability(disp, v, grid, 3);
  Result r;
  auto& j = r.json;
  j["speed"] = speed;
  j["landau_velocity"] = lr.landau_velocity;
  j["grid_velocity"] = lr.grid_velocity;
  j["analytic_velocity"] = lr.analytic_velocity ? ordered_json(*lr.analytic_velocity) : ordered_json(nullptr);
  j["excitable_count"] = lr.excitable.size();
  j["excitable"] = lr.excitable.size() > 0;
  r.csv.push_back({"excitability", lr.scan_csv});
  if (cfg.doc.contains("geometry")) {
    const BoxGeometry geom = cfg.geometry();
    const SpectralTable table = enumerate_spectrum(geom, cfg.stats, cfg.require_e_max(), cfg.units);
    std::vector<DualVector> ks;
    if (blk.contains("boosts")) {
      for (const auto& kj : blk.at("boosts")) ks.push_back(parse_dual(kj, geom.dim(), "landau.boosts"));
    } else {
      ks.push_back(DualVector::zero(geom.dim()));
    }
    auto checks = ordered_json::array();
    std::string csv = q_header(geom.dim()) + ",multiset_equal,identity,max_term_residual\n";
    for (const DualVector& k : ks) {
      try {
        const BoostSetReport rep = boost_set_equality_check(table, k);
        checks.push_back(ordered_json::parse(rep.to_json()));
        csv += q_cells(k) + "," + (rep.multiset_equal ? "true" : "false") + "," + (rep.identity ? "true" : "false") + "," +
               fmt(rep.max_term_residual) + "\n";
      } catch (const Error& e) {
        if (e.code() != ErrorCode::WindowNotClosed) throw;
        checks.push_back({{"k", coords(k)}, {"error", error_code_name(e.code())}, {"message", e.what()}});
        csv += q_cells(k) + ",window-not-closed,,\n";
      }
    }
    j["boost_set_checks"] = std::move(checks);
    r.csv.push_back({"boost_set", csv});
  }
  return r;
}

Result dispatch(const std::string& name, const RunConfig& cfg);

// Fixed small configurations exercising every command.
Result cmd_selftest(const RunConfig& cfg) {
  static const std::vector<std::pair<std::string, const char*>> suite = {
      {"dist", R"({"geometry":{"d":1,"L":6.283185307179586,"N":2},"thermal":{"beta":1},"statistics":"bose","e_max":12})"},
      {"bounds", R"({"geometry":{"d":1,"L_grid":[2,4,8],"N":2},"thermal":{"beta":1},"statistics":"boltzmann","e_max":60})"},
      {"clt", R"({"geometry":{"d":1,"L":1,"rho":1},"thermal":{"lambda":1},"statistics":"bose","clt":{"N":[2,4,6]}})"},
      {"com", R"({"geometry":{"d":1,"L":6.283185307179586,"N":2},"thermal":{"beta":1},"statistics":"bose","e_max":12,"com":{"boost":[1]}})"},
      {"measure", R"({"measure":{"family":{"kind":"crystal","points":[[0],[6.283185307179586],[-6.283185307179586]],"weights":[0.5,0.25,0.25]},"L_grid":[16,32,64,128]}})"},
      {"twofluid", R"({"units":"si","twofluid":{"T":0,"T_s":2.17,"eta":1,"v":30}})"},
      {"landau", R"({"geometry":{"d":1,"L":6.283185307179586,"N":2},"statistics":"bose","e_max":12,"landau":{"dispersion":{"kind":"phonon","c":1},"v":[2,0,0],"boosts":[[0],[1],[-1]]}})"},
  };
  Result r;
  for (const auto& [name, text] : suite) {
    RunConfig sub = parse_config(text);
    sub.threads = cfg.threads;
    r.json[name] = dispatch(name, sub).json;
  }
  std::string csv = "command,ok\n";
  for (const auto& [name, text] : suite) csv += name + ",true\n";
  r.csv.push_back({"selftest", csv});
  return r;
}

Result dispatch(const std::string& name, const RunConfig& cfg) {
  static const std::map<std::string, std::function<Result(const RunConfig&)>> table = {
      {"dist", cmd_dist},       {"bounds", cmd_bounds},     {"clt", cmd_clt},       {"com", cmd_com},
      {"measure", cmd_measure}, {"twofluid", cmd_twofluid}, {"landau", cmd_landau}, {"selftest", cmd_selftest},
  };
  auto it = table.find(name);
  if (it == table.end()) config_error("command", "unknown subcommand '" + name + "'");
  return it->second(cfg);
}

// Restores the worker count on scope exit.
class ThreadScope {
public:
  explicit ThreadScope(unsigned n) : saved_(worker_threads()) { set_worker_threads(n); }
  ~ThreadScope() { set_worker_threads(saved_); }
  ThreadScope(const ThreadScope&) = delete;
  ThreadScope& operator=(const ThreadScope&) = delete;

private:
  unsigned saved_;
};

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"dist", "bounds", "clt", "com", "measure", "twofluid", "landau", "selftest"};
  return names;
}

CommandOutput run_command(const std::string& name, const std::string& config_json, const Overrides& ov) {
  const RunConfig cfg = parse_config(config_json, ov);
  ThreadScope threads(cfg.threads);
  const Result res = dispatch(name, cfg);
  CommandOutput out;
  out.out_path = cfg.out_path;
  if (cfg.format == OutputFormat::Json) {
    ordered_json doc;
    doc["command"] = name;
    doc["config"] = cfg.echo();
    doc["result"] = res.json;
    out.text = doc.dump(1) + "\n";
  } else {
    std::ostringstream os;
    os << "# command: " << name << "\n# config: " << cfg.echo().dump() << "\n";
    for (const CsvSection& s : res.csv) os << "# section: " << s.name << "\n" << s.body;
    out.text = os.str();
  }
  return out;
}

}  // namespace totmom::app
