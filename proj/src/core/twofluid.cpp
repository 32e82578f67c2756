#include "twofluid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "error.hpp"
#include "numeric.hpp"

namespace totmom {

void FlowParams::validate() const {
  if (!(T >= 0.0)) fail(ErrorCode::InvalidParams, "flow: T must be >= 0");
  if (!(T_s > 0.0)) fail(ErrorCode::InvalidParams, "flow: T_s must be positive");
  if (!(eta > 0.0 && eta <= 1.0)) fail(ErrorCode::InvalidParams, "flow: eta must lie in (0, 1]");
  if (!(mass > 0.0)) fail(ErrorCode::InvalidParams, "flow: mass must be positive");
  if (!(v >= 0.0)) fail(ErrorCode::InvalidParams, "flow: v must be >= 0");
  if (!(kB > 0.0)) fail(ErrorCode::InvalidParams, "flow: k_B must be positive");
}

double heating_temperature(const FlowParams& fp, double alpha) {
  fp.validate();
  if (!(alpha >= 0.0 && alpha <= 1.0)) fail(ErrorCode::InvalidArgument, "heating_temperature: alpha must lie in [0, 1]");
  return fp.T + fp.eta * fp.mass * fp.v * fp.v * (1.0 - alpha * alpha) / fp.kB;
}

double steady_temperature(const FlowParams& fp) {
  fp.validate();
  return fp.T + fp.eta * fp.mass * fp.v * fp.v / fp.kB;
}

double critical_velocity(const FlowParams& fp) {
  fp.validate();
  if (fp.T > fp.T_s) fail(ErrorCode::InvalidDomain, "critical_velocity: T exceeds T_s");
  return std::sqrt(fp.kB * (fp.T_s - fp.T) / (fp.eta * fp.mass));
}

RelaxationSeries relaxation_series(const FlowParams& fp, const std::vector<std::pair<double, double>>& schedule) {
  fp.validate();
  if (schedule.empty() || schedule.front().first != 0.0 || schedule.front().second != 1.0)
    fail(ErrorCode::ScheduleNotMonotone, "relaxation: schedule must start at (t = 0, alpha = 1)");
  RelaxationSeries out;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const auto [t, a] = schedule[i];
    if (i > 0 && (!(t > schedule[i - 1].first) || a > schedule[i - 1].second))
      fail(ErrorCode::ScheduleNotMonotone, "relaxation: step " + std::to_string(i) + " breaks increasing t / nonincreasing alpha");
    RelaxationStep s;
    s.t = t;
    s.alpha = a;
    s.T_t = heating_temperature(fp, a);
    s.collapsed = s.T_t >= fp.T_s;
    if (s.collapsed && !out.first_collapse) out.first_collapse = i;
    out.steps.push_back(s);
  }
  return out;
}

std::string RelaxationSeries::to_csv() const {
  std::ostringstream os;
  os << "t,alpha,T_t,state\n";
  for (const auto& s : steps)
    os << format_double(s.t) << ',' << format_double(s.alpha) << ',' << format_double(s.T_t) << ','
       << (s.collapsed ? "normal" : "superfluid") << '\n';
  return os.str();
}

std::string critical_velocity_curve_csv(const FlowParams& fp, double T_min, int points) {
  if (points < 2) fail(ErrorCode::InvalidArgument, "v_cr curve: need at least 2 points");
  std::ostringstream os;
  os << "T,v_cr\n";
  for (int i = 0; i < points; ++i) {
    FlowParams p = fp;
    p.T = T_min + (fp.T_s - T_min) * i / (points - 1);
    if (i == points - 1) p.T = fp.T_s;
    os << format_double(p.T) << ',' << format_double(critical_velocity(p)) << '\n';
  }
  return os.str();
}

DispersionKind parse_dispersion_kind(const std::string& name) {
  if (name == "phonon") return DispersionKind::Phonon;
  if (name == "roton") return DispersionKind::Roton;
  if (name == "phonon_roton") return DispersionKind::PhononRoton;
  if (name == "tabulated") return DispersionKind::Tabulated;
  fail(ErrorCode::InvalidParams, "unknown dispersion kind '" + name + "'");
}

void ModelDispersion::validate() const {
  if (!(hbar > 0.0)) fail(ErrorCode::InvalidParams, "dispersion: hbar must be positive");
  if ((kind == DispersionKind::Phonon || kind == DispersionKind::PhononRoton) && !(c > 0.0))
    fail(ErrorCode::InvalidParams, "dispersion: c must be positive");
  if ((kind == DispersionKind::Roton || kind == DispersionKind::PhononRoton) && (!(Delta >= 0.0) || !(mu > 0.0) || !(q_r >= 0.0)))
    fail(ErrorCode::InvalidParams, "dispersion: roton needs Delta >= 0, mu > 0, q_r >= 0");
  if (kind == DispersionKind::Tabulated) {
    if (table.size() < 2) fail(ErrorCode::InvalidParams, "dispersion: table needs at least 2 samples");
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (table[i].second < 0.0) fail(ErrorCode::InvalidParams, "dispersion: tabulated energies must be >= 0");
      if (i > 0 && !(table[i].first > table[i - 1].first)) fail(ErrorCode::InvalidParams, "dispersion: table must ascend in |q|");
    }
  }
}

double ModelDispersion::energy(double q) const {
  const double roton = Delta + hbar * hbar * (q - q_r) * (q - q_r) / (2.0 * mu);
  switch (kind) {
    case DispersionKind::Phonon: return c * hbar * q;
    case DispersionKind::Roton: return roton;
    case DispersionKind::PhononRoton: return std::min(c * hbar * q, roton);
    case DispersionKind::Tabulated: {
      if (q < table.front().first || q > table.back().first)
        fail(ErrorCode::InvalidDomain, "dispersion: |q| = " + format_double(q) + " outside the tabulated range");
      auto it = std::lower_bound(table.begin(), table.end(), q, [](const auto& row, double x) { return row.first < x; });
      if (it->first == q) return it->second;
      const auto& hi = *it;
      const auto& lo = *(it - 1);
      return lo.second + (hi.second - lo.second) * (q - lo.first) / (hi.first - lo.first);
    }
  }
  return 0.0;
}

double roton_landau_velocity(const ModelDispersion& disp) {
  const double a = disp.hbar * disp.hbar / (2.0 * disp.mu);
  // d/dq [(Delta + a (q - q_r)^2) / q] = 0  <=>  q^2 = q_r^2 + Delta / a
  const double q = std::sqrt(disp.q_r * disp.q_r + disp.Delta / a);
  if (!(q > 0.0)) return 0.0;
  return (disp.Delta + a * (q - disp.q_r) * (q - disp.q_r)) / (disp.hbar * q);
}

LandauResult landau_excitability(const ModelDispersion& disp, const Point& v, const std::vector<Point>& q_grid, int dim) {
  disp.validate();
  LandauResult r;
  std::ostringstream csv;
  csv << "q,eps,eps_minus_hbar_q_v\n";
  double speed = 0.0;
  for (int i = 0; i < dim; ++i) speed += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
  speed = std::sqrt(speed);
  double best = std::numeric_limits<double>::infinity();
  for (const Point& q : q_grid) {
    double qq = 0.0, qv = 0.0;
    for (int i = 0; i < dim; ++i) {
      qq += q[static_cast<std::size_t>(i)] * q[static_cast<std::size_t>(i)];
      qv += q[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
    }
    const double qn = std::sqrt(qq);
    const double e = disp.energy(qn);
    if (e + disp.hbar * qv < 0.0) r.excitable.push_back(q);
    if (qn > 0.0) best = std::min(best, e / (disp.hbar * qn));
    csv << format_double(qn) << ',' << format_double(e) << ',' << format_double(e - disp.hbar * qn * speed) << '\n';
  }
  r.grid_velocity = best;
  if (disp.kind == DispersionKind::Phonon) r.analytic_velocity = disp.c;
  if (disp.kind == DispersionKind::Roton) r.analytic_velocity = roton_landau_velocity(disp);
  if (disp.kind == DispersionKind::PhononRoton) r.analytic_velocity = std::min(disp.c, roton_landau_velocity(disp));
  r.landau_velocity = r.analytic_velocity ? *r.analytic_velocity : r.grid_velocity;
  r.scan_csv = csv.str();
  return r;
}

namespace {

std::vector<std::size_t> ranks(const std::vector<double>& e) {
  std::vector<std::size_t> order(e.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return e[a] < e[b]; });
  std::vector<std::size_t> rank(e.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r;
  return rank;
}

}  // namespace

BoostSetReport boost_set_equality_check(const SpectralTable& table, const DualVector& k,
                                        const std::vector<DualVector>& window, double tol) {
  const BoxGeometry& geom = table.geometry();
  if (k.dim != geom.dim()) fail(ErrorCode::InvalidArgument, "boost_set_equality_check: boost dimension mismatch");
  BoostSetReport rep;
  rep.k = k;
  if (window.empty()) {
    for (const auto& [q, levels] : table.entries())
      if (is_irreducible(q, geom) && !levels.empty()) rep.window.push_back(q);
  } else {
    rep.window = window;
  }
  if (rep.window.empty()) fail(ErrorCode::WindowNotClosed, "boost_set_equality_check: empty window");
  const std::int64_t N = geom.particles();
  const double unit = energy_unit(geom, table.units());
  std::vector<double> before, shifted, after;
  for (const DualVector& q : rep.window) {
    const auto* lv = table.find(q);
    const auto* bv = table.find(q + N * k);
    if (lv == nullptr || lv->empty() || bv == nullptr || bv->empty())
      fail(ErrorCode::WindowNotClosed, "boost_set_equality_check: " + q.to_string() + " or its image " +
                                           (q + N * k).to_string() + " is missing from the table");
    before.push_back(lv->front());
    shifted.push_back(lv->front() + unit * static_cast<double>(N * k.norm_squared() + 2 * k.dot(q)));
    after.push_back(bv->front());
  }
  for (std::size_t i = 0; i < before.size(); ++i)
    rep.max_term_residual = std::max(rep.max_term_residual, std::abs(after[i] - shifted[i]));
  std::vector<double> a = shifted, b = after;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  bool equal = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double r = std::abs(a[i] - b[i]);
    rep.max_set_residual = std::max(rep.max_set_residual, r);
    if (r > tol * std::max(1.0, std::abs(b[i]))) equal = false;
  }
  rep.multiset_equal = equal;
  const auto r0 = ranks(before);
  const auto r1 = ranks(after);
  rep.permutation.assign(before.size(), 0);
  for (std::size_t i = 0; i < before.size(); ++i) {
    rep.permutation[r0[i]] = r1[i];
    if (r0[i] != r1[i]) rep.identity = false;
  }
  return rep;
}

std::string BoostSetReport::to_json() const {
  nlohmann::ordered_json j;
  std::vector<std::int64_t> kk(k.n.begin(), k.n.begin() + k.dim);
  j["k"] = kk;
  auto w = nlohmann::ordered_json::array();
  for (const DualVector& q : window) w.push_back(std::vector<std::int64_t>(q.n.begin(), q.n.begin() + q.dim));
  j["window"] = std::move(w);
  j["max_term_residual"] = max_term_residual;
  j["max_set_residual"] = max_set_residual;
  j["multiset_equal"] = multiset_equal;
  j["permutation"] = permutation;
  j["identity"] = identity;
  return j.dump(1);
}

TwoFluidWeights two_fluid_weights(const LimitReport& report) {
  TwoFluidWeights w;
  w.nu0 = std::clamp(report.nu0, 0.0, 1.0);
  w.infinity_mass = std::clamp(report.gamma_inf, 0.0, 1.0 - w.nu0);
  w.continuous_mass = 1.0 - w.nu0 - w.infinity_mass;
  return w;
}

}  // namespace totmom
