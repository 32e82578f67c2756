#include "asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <json.hpp>

#include "error.hpp"
#include "numeric.hpp"

namespace totmom {

double tail_probability(const MomentumDistribution& dist, const BoxGeometry& geom, int J, int axis) {
  if (J < 1) fail(ErrorCode::InvalidArgument, "tail_probability: J must be >= 1");
  if (axis < 1 || axis > geom.dim()) fail(ErrorCode::InvalidArgument, "tail_probability: axis out of range");
  const std::int64_t threshold = (2 * static_cast<std::int64_t>(J) - 1) * geom.particles();
  double s = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const std::int64_t m = dist.support[i][axis - 1];
    if (2 * (m < 0 ? -m : m) > threshold) s += dist.weights[i];
  }
  return s;
}

double clt_reference_cdf(double x, const ThermalParams& th, double rho) {
  if (!(x >= 0.0)) fail(ErrorCode::InvalidArgument, "clt_reference_cdf: x must be >= 0");
  if (!(rho > 0.0)) fail(ErrorCode::InvalidArgument, "clt_reference_cdf: rho must be positive");
  const double c = th.lambda() * rho;
  const double k = c * c / (4.0 * kPi);
  // beyond c y / (2 sqrt pi) = 9 the remaining mass is below 1e-36
  const double y_max = 18.0 * std::sqrt(kPi) / c;
  const double upper = std::min(x, y_max);
  if (upper == 0.0) return 0.0;
  auto f = [k](double y) { return std::exp(-k * y * y); };
  double err = 0.0;
  const double integral =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, upper, 15, 1e-15, &err);
  return std::min(1.0, c / kPi * integral);
}

double cell_smoothed_abs_cdf(const MomentumDistribution& dist, double t) {
  if (dist.dim != 1) fail(ErrorCode::InvalidArgument, "cell_smoothed_abs_cdf: one-dimensional laws only");
  if (t <= 0.0) return 0.0;
  const double w = 2.0 * kPi / dist.side;
  double s = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const double c = w * static_cast<double>(dist.support[i][0]);
    const double lo = std::max(c - 0.5 * w, -t);
    const double hi = std::min(c + 0.5 * w, t);
    if (hi > lo) s += dist.weights[i] * (hi - lo) / w;
  }
  return s;
}

std::vector<double> clt_grid(const ThermalParams& th, double rho, int points) {
  if (points < 2) fail(ErrorCode::InvalidArgument, "clt_grid: need at least 2 points");
  const double x_max = 4.0 / (th.lambda() * rho);
  std::vector<double> xs(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) xs[static_cast<std::size_t>(i)] = x_max * i / (points - 1);
  return xs;
}

CltReport clt_convergence_report(const std::vector<BoxGeometry>& geoms, Statistics stats, const ThermalParams& th) {
  if (geoms.empty()) fail(ErrorCode::InvalidArgument, "clt report: no geometries");
  CltReport rep;
  rep.stats = stats;
  rep.rho = geoms.front().density();
  rep.lambda = th.lambda();
  rep.x_grid = clt_grid(th, rep.rho);
  std::vector<double> reference(rep.x_grid.size());
  for (std::size_t i = 0; i < reference.size(); ++i) reference[i] = clt_reference_cdf(rep.x_grid[i], th, rep.rho);
  for (std::size_t g = 0; g < geoms.size(); ++g) {
    const BoxGeometry& geom = geoms[g];
    if (geom.dim() != 1) fail(ErrorCode::InvalidArgument, "clt report: geometries must be one-dimensional");
    if (std::abs(geom.density() - rep.rho) > 1e-12 * rep.rho) fail(ErrorCode::InvalidArgument, "clt report: densities differ");
    if (g > 0 && geom.particles() <= geoms[g - 1].particles())
      fail(ErrorCode::InvalidArgument, "clt report: N must be strictly increasing");
    const MomentumDistribution dist = canonical_distribution(geom, stats, th);
    const double scale = rep.rho * std::sqrt(static_cast<double>(geom.particles()));
    CltRow row;
    row.N = geom.particles();
    row.L = geom.side();
    row.deficit = dist.deficit;
    for (std::size_t i = 0; i < rep.x_grid.size(); ++i) {
      const double t = scale * rep.x_grid[i];
      row.sup_distance = std::max(row.sup_distance, std::abs(cell_smoothed_abs_cdf(dist, t) - reference[i]));
      row.raw_sup_distance = std::max(row.raw_sup_distance, std::abs(lattice_cdf(dist, t) - reference[i]));
    }
    rep.rows.push_back(row);
  }
  return rep;
}

std::string CltReport::to_csv() const {
  std::ostringstream os;
  os << "N,L,sup_distance,raw_sup_distance,deficit\n";
  for (const CltRow& r : rows)
    os << r.N << ',' << format_double(r.L) << ',' << format_double(r.sup_distance) << ','
       << format_double(r.raw_sup_distance) << ',' << format_double(r.deficit) << '\n';
  return os.str();
}

std::string CltReport::to_json() const {
  nlohmann::ordered_json j;
  j["statistics"] = statistics_name(stats);
  j["rho"] = rho;
  j["lambda"] = lambda;
  j["cdf_convention"] = "cell-smoothed";
  j["x_grid"] = {{"min", x_grid.front()}, {"max", x_grid.back()}, {"points", x_grid.size()}};
  auto rows_json = nlohmann::ordered_json::array();
  for (const CltRow& r : rows)
    rows_json.push_back({{"N", r.N}, {"L", r.L}, {"sup_distance", r.sup_distance},
                         {"raw_sup_distance", r.raw_sup_distance}, {"deficit", r.deficit}});
  j["rows"] = std::move(rows_json);
  return j.dump(1);
}

TailBounds tail_bounds_2d(const ThermalParams& th, double rho, int J, double f_est) {
  if (J < 1) fail(ErrorCode::InvalidArgument, "tail_bounds_2d: J must be >= 1");
  if (!(f_est > 0.0) || f_est > 1.0) fail(ErrorCode::InvalidArgument, "tail_bounds_2d: f_est must be in (0, 1]");
  if (!(rho > 0.0)) fail(ErrorCode::InvalidArgument, "tail_bounds_2d: rho must be positive");
  const double lam = th.lambda();
  const double a = kPi * lam * lam * rho;
  TailBounds b;
  // a truncated partial sum of positive terms is still a lower bound
  const SeriesValue low = theta_cosh_series(a, 0.0, J, 1e-16);
  b.lower = 2.0 * f_est * low.value;
  CompensatedSum up;
  for (long j = J;; ++j) {
    const double jj = static_cast<double>(j);
    up.add(std::exp(-a * jj * (jj - 1.0)));
    const double K = jj + 1.0;
    const double tail = std::exp(-a * K * (K - 1.0)) / (-std::expm1(-2.0 * a * K));
    if (tail <= 1e-16 * up.value()) {
      b.upper = 2.0 * f_est * (up.value() + tail);
      break;
    }
    if (j - J > 10'000'000) fail(ErrorCode::NoConvergence, "tail_bounds_2d: series did not converge");
  }
  return b;
}

double f_estimator_2d(const SpectralTable& table, const BoxGeometry& geom, const ThermalParams& th) {
  if (geom.dim() != 2) fail(ErrorCode::InvalidArgument, "f_estimator_2d: requires d = 2");
  const double e0 = table.min_energy();
  const double L = geom.side();
  const double t = kPi * th.lambda() * th.lambda() / (L * L);
  const double a = t * static_cast<double>(geom.particles());
  CompensatedSum num, den;
  for (const auto& [q, levels] : table.entries()) {
    if (!is_irreducible(q, geom)) continue;
    CompensatedSum w;
    for (double e : levels) w.add(std::exp(-th.beta() * (e - e0)));
    const double s1 = theta_cosh_series(a, 2.0 * t * static_cast<double>(q[0]), 0, 1e-16).value;
    const double s2 = theta_cosh_series(a, 2.0 * t * static_cast<double>(q[1]), 0, 1e-16).value;
    num.add(w.value() * s2);
    den.add(w.value() * s1 * s2);
  }
  if (!(den.value() > 0.0)) fail(ErrorCode::InvalidArgument, "f_estimator_2d: table has no irreducible entries");
  return num.value() / den.value();
}

}  // namespace totmom
