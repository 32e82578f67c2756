#include "theta.hpp"

#include <cmath>
#include <limits>

#include "error.hpp"
#include "numeric.hpp"
#include "spectrum.hpp"

namespace totmom {

ThermalParams::ThermalParams(double beta, const Units& units) : beta_(beta), units_(units) {
  if (!(beta > 0.0) || !std::isfinite(beta)) fail(ErrorCode::InvalidArgument, "thermal: beta must be positive");
  if (!(units.mass > 0.0) || !(units.hbar > 0.0)) fail(ErrorCode::InvalidArgument, "thermal: mass and hbar must be positive");
}

double ThermalParams::lambda() const noexcept { return std::sqrt(2.0 * kPi * beta_ * units_.hbar * units_.hbar / units_.mass); }

ThermalParams ThermalParams::from_lambda(double lambda, const Units& units) {
  if (!(lambda > 0.0)) fail(ErrorCode::InvalidArgument, "thermal: lambda must be positive");
  return ThermalParams(lambda * lambda * units.mass / (2.0 * kPi * units.hbar * units.hbar), units);
}

namespace {

constexpr long kMaxSeriesTerms = 10'000'000;

// Majorant of sum_{j >= J} exp(-a j (j-1)).
double shifted_gauss_tail(double a, long J) {
  const double jj = static_cast<double>(J);
  return std::exp(-a * jj * (jj - 1.0)) / (-std::expm1(-a * (2.0 * jj - 1.0)));
}

}  // namespace

SeriesValue theta_cosh_series(double a, double b, long from, double rel_tol) {
  if (!(a > 0.0)) fail(ErrorCode::InvalidArgument, "theta series: a must be positive");
  if (!(rel_tol > 0.0)) fail(ErrorCode::InvalidArgument, "theta series: tolerance must be positive");
  if (std::abs(b) > a * (1.0 + 1e-12))
    fail(ErrorCode::InvalidDomain, "theta series: |b| > a, wave vector outside the irreducible set");
  const bool two_sided = from <= 0;
  const double weight = two_sided ? 2.0 : 1.0;
  CompensatedSum s;
  if (two_sided) s.add(1.0);
  long j = two_sided ? 1 : from;
  SeriesValue out;
  for (;; ++j) {
    if (j - (two_sided ? 1 : from) > kMaxSeriesTerms)
      fail(ErrorCode::NoConvergence, "theta series: term guard exceeded");
    const double jj = static_cast<double>(j);
    const double base = -a * jj * jj;
    s.add(weight * 0.5 * (std::exp(base + b * jj) + std::exp(base - b * jj)));
    ++out.terms;
    const double tail = weight * shifted_gauss_tail(a, j + 1);
    const double partial = s.value();
    if (tail <= rel_tol * partial || (partial == 0.0 && tail == 0.0)) {
      out.value = partial;
      out.tail_bound = partial > 0.0 ? tail / partial : tail;
      return out;
    }
  }
}

SeriesValue gauss_sum(const DualVector& q, const BoxGeometry& geom, const ThermalParams& th, double rel_tol) {
  if (!is_irreducible(q, geom)) fail(ErrorCode::InvalidDomain, "gauss_sum: q = " + q.to_string() + " is not irreducible");
  const double lam = th.lambda();
  const double L = geom.side();
  const double t = kPi * lam * lam / (L * L);
  const double a = t * static_cast<double>(geom.particles());
  SeriesValue out;
  out.value = 1.0;
  double rel = 1.0;
  for (int i = 0; i < geom.dim(); ++i) {
    const SeriesValue f = theta_cosh_series(a, 2.0 * t * static_cast<double>(q[i]), 0, rel_tol);
    out.value *= f.value;
    out.terms += f.terms;
    rel *= 1.0 + f.tail_bound;
  }
  out.tail_bound = rel - 1.0;
  return out;
}

RatioBounds ratio_bounds(const BoxGeometry& geom, const ThermalParams& th) {
  const int d = geom.dim();
  const double r = std::pow(geom.side(), 1.0 - 0.5 * d) / (th.lambda() * std::sqrt(geom.density()));
  RatioBounds b;
  b.lower = std::max(1.0, std::pow(r - 1.0, d));
  b.upper = std::pow(r + 3.0, d);
  return b;
}

double average_ratio(const SpectralTable& table, const BoxGeometry& geom, const ThermalParams& th) {
  std::vector<DualVector> qs;
  std::vector<double> weights;
  const double e0 = table.min_energy();
  for (const auto& [Q, levels] : table.entries()) {
    if (!is_irreducible(Q, geom)) continue;
    CompensatedSum w;
    for (double e : levels) w.add(std::exp(-th.beta() * (e - e0)));
    qs.push_back(Q);
    weights.push_back(w.value());
  }
  if (qs.empty()) fail(ErrorCode::InvalidArgument, "average_ratio: table has no irreducible entries");
  const auto sums = parallel_map<double>(qs.size(), [&](std::size_t i) { return gauss_sum(qs[i], geom, th).value; });
  CompensatedSum num, den;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    num.add(weights[i] * sums[i]);
    den.add(weights[i]);
  }
  return num.value() / den.value();
}

namespace {

constexpr double kKernelTol = 1e-18;

double wrap_offset(double u, double L) {
  u = std::fmod(u, L);
  if (u >= 0.5 * L) u -= L;
  if (u < -0.5 * L) u += L;
  return u;
}

double dual_sum_1d(double u, double alpha, double L) {
  u = wrap_offset(u, L);
  const double c = alpha * std::pow(2.0 * kPi / L, 2);
  CompensatedSum s;
  s.add(1.0);
  for (long j = 1; j < kMaxSeriesTerms; ++j) {
    const double jj = static_cast<double>(j);
    s.add(2.0 * std::exp(-c * jj * jj) * std::cos(2.0 * kPi * jj * u / L));
    const double J = jj + 1.0;
    const double tail = 2.0 * std::exp(-c * J * J) / (-std::expm1(-c * (2.0 * J + 1.0)));
    if (tail <= kKernelTol * std::abs(s.value())) break;
  }
  return s.value() / L;
}

double image_sum_1d(double u, double alpha, double L) {
  u = wrap_offset(u, L);
  const double four_alpha = 4.0 * alpha;
  CompensatedSum s;
  s.add(std::exp(-u * u / four_alpha));
  for (long n = 1; n < kMaxSeriesTerms; ++n) {
    const double nn = static_cast<double>(n);
    const double up = u + nn * L;
    const double dn = u - nn * L;
    s.add(std::exp(-up * up / four_alpha));
    s.add(std::exp(-dn * dn / four_alpha));
    // remaining images sit at distance >= (n + 1/2) L
    const double r = (nn + 0.5) * L;
    const double tail = 2.0 * std::exp(-r * r / four_alpha) / (-std::expm1(-L * L / four_alpha));
    if (tail <= kKernelTol * s.value()) break;
  }
  return s.value() / std::sqrt(kPi * four_alpha);
}

template <class Fn>
double product_over_dims(std::span<const double> x, std::span<const double> y, double alpha, const BoxGeometry& geom,
                         Fn&& one_dim) {
  const int d = geom.dim();
  if (static_cast<int>(x.size()) != d || static_cast<int>(y.size()) != d)
    fail(ErrorCode::InvalidArgument, "heat kernel: point dimension mismatch");
  if (!(alpha > 0.0)) fail(ErrorCode::InvalidArgument, "heat kernel: alpha must be positive");
  double v = 1.0;
  for (int i = 0; i < d; ++i) v *= one_dim(x[i] - y[i], alpha, geom.side());
  return v;
}

}  // namespace

double heat_kernel_switch_alpha(double side) noexcept { return side * side / (4.0 * kPi); }

double heat_kernel_dual_sum(std::span<const double> x, std::span<const double> y, double alpha, const BoxGeometry& geom) {
  return product_over_dims(x, y, alpha, geom, dual_sum_1d);
}

double heat_kernel_image_sum(std::span<const double> x, std::span<const double> y, double alpha, const BoxGeometry& geom) {
  return product_over_dims(x, y, alpha, geom, image_sum_1d);
}

double heat_kernel_periodic(std::span<const double> x, std::span<const double> y, double alpha, const BoxGeometry& geom) {
  if (alpha >= heat_kernel_switch_alpha(geom.side())) return heat_kernel_dual_sum(x, y, alpha, geom);
  return heat_kernel_image_sum(x, y, alpha, geom);
}

}  // namespace totmom
