#include "measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <json.hpp>

#include "error.hpp"
#include "numeric.hpp"

namespace totmom {

KernelSamples fourier_transform(const AtomicMeasure& mu, const std::vector<Point>& xs) {
  KernelSamples k = com_kernel(mu, xs);
  for (auto& v : k.values) v = std::conj(v);
  return k;
}

double gamma_L(const AtomicMeasure& mu, double kappa) {
  if (!(kappa >= 0.0)) fail(ErrorCode::InvalidArgument, "gamma_L: kappa must be >= 0");
  return lattice_cdf(mu, kappa);
}

double dirichlet_kernel(int n, double x) {
  if (n < 0) fail(ErrorCode::InvalidArgument, "dirichlet_kernel: n must be >= 0");
  const double s = std::sin(0.5 * x);
  if (std::abs(s) < 1e-3) {
    double v = 1.0;
    for (int j = 1; j <= n; ++j) v += 2.0 * std::cos(j * x);
    return v;
  }
  return std::sin((2.0 * n + 1.0) * 0.5 * x) / s;
}

double fejer_kernel(int n, double x) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "fejer_kernel: n must be >= 1");
  const double s = std::sin(0.5 * x);
  if (std::abs(s) < 1e-4) {
    // Cesaro form near the removable singularities
    double v = 1.0;
    for (int j = 1; j < n; ++j) v += 2.0 * (1.0 - static_cast<double>(j) / n) * std::cos(j * x);
    return std::max(v, 0.0);
  }
  const double t = std::sin(0.5 * n * x);
  return t * t / (n * s * s);
}

namespace {

constexpr double kQuadTol = 1e-13;

template <class F>
double gk(F&& f, double a, double b) {
  if (a == b) return 0.0;
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 10, kQuadTol, &err);
}

// Integral of g over [a, b] split at every multiple of h = 2 pi / n. On the
// piece above z = l h, g(z, u) is called at x = z + u with u measured from z.
template <class F>
double split_at_fejer_zeros(int n, double a, double b, F&& g) {
  if (b < a) return -split_at_fejer_zeros(n, b, a, g);
  const double h = 2.0 * kPi / n;
  CompensatedSum s;
  double lo = a;
  long l = static_cast<long>(std::floor(a / h));
  while (lo < b) {
    const double z = l * h;
    const double hi = std::min(b, (l + 1) * h);
    if (hi > lo) s.add(gk([&](double u) { return g(z, u); }, lo - z, hi - z));
    lo = hi;
    ++l;
  }
  return s.value();
}

// F_n(z + u) for z a multiple of 2 pi / n. sin(n (z + u) / 2) = +-sin(n u / 2),
// which avoids the large-argument rounding of the direct form.
double fejer_at(int n, double z, double u) {
  const double s = std::sin(0.5 * (z + u));
  if (std::abs(s) < 1e-4) return fejer_kernel(n, z + u);
  const double t = std::sin(0.5 * n * u);
  return t * t / (n * s * s);
}

}  // namespace

double fejer_integral(int n, double a, double b) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "fejer_integral: n must be >= 1");
  return split_at_fejer_zeros(n, a, b, [n](double z, double u) { return fejer_at(n, z, u); }) / (2.0 * kPi);
}

double fejer_central_mass(int n, double alpha) {
  if (n < 2) fail(ErrorCode::InvalidArgument, "fejer_central_mass: n must be >= 2");
  if (!(alpha > 0.0) || alpha > 2.0 * kPi * (1.0 + 1e-15))
    fail(ErrorCode::InvalidArgument, "fejer_central_mass: alpha must lie in (0, 2 pi]");
  // F_n is even
  return 2.0 * fejer_integral(n, 0.0, alpha / n);
}

double fejer_central_lower_bound(double alpha) {
  if (alpha >= std::sqrt(12.0)) return 4.0 / (std::sqrt(3.0) * kPi);
  return alpha / kPi * (1.0 - alpha * alpha / 36.0);
}

int fejer_l0(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) fail(ErrorCode::InvalidArgument, "fejer_l0: epsilon must lie in (0, 1)");
  const double c = 1.0 / (kPi * (1.0 - kPi * kPi / 12.0));
  // sum_{l >= l0} l^-2 is the trigamma function at l0
  for (int l0 = 1; l0 < 100'000'000; ++l0)
    if (c * boost::math::trigamma(static_cast<double>(l0)) <= 0.5 * epsilon) return l0;
  fail(ErrorCode::NoConvergence, "fejer_l0: epsilon too small");
}

double sigma_L(const AtomicMeasure& mu, int n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "sigma_L: n must be >= 1");
  // each k lies in prod_i (n - |k_i|)_+ of the n^d rectangles
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    double c = 1.0;
    for (int a = 0; a < mu.dim; ++a) {
      const std::int64_t m = std::abs(mu.support[i][a]);
      c *= m >= n ? 0.0 : static_cast<double>(n - m) / n;
    }
    s += mu.weights[i] * c;
  }
  return s;
}

double sigma_L_fejer_integral(const AtomicMeasure& mu, int n) {
  if (mu.dim != 1) fail(ErrorCode::InvalidArgument, "sigma_L_fejer_integral: one-dimensional measures only");
  auto integrand = [&](double z, double u) {
    const double y = z + u;
    double f = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) f += mu.weights[i] * std::cos(static_cast<double>(mu.support[i][0]) * y);
    return f * fejer_at(n, z, u);
  };
  return split_at_fejer_zeros(n, -kPi, kPi, integrand) / (2.0 * kPi);
}

const char* family_kind_name(FamilyKind k) noexcept {
  switch (k) {
    case FamilyKind::Crystal: return "crystal";
    case FamilyKind::NormalFluid: return "normal_fluid";
    case FamilyKind::Superfluid: return "superfluid";
    case FamilyKind::BecGas: return "bec_gas";
    case FamilyKind::Escaping: return "escaping";
  }
  return "unknown";
}

FamilyKind parse_family_kind(const std::string& name) {
  for (FamilyKind k : {FamilyKind::Crystal, FamilyKind::NormalFluid, FamilyKind::Superfluid, FamilyKind::BecGas,
                       FamilyKind::Escaping})
    if (name == family_kind_name(k)) return k;
  fail(ErrorCode::InvalidParams, "unknown measure family '" + name + "'");
}

namespace {

// Even discretization of a centred 1D Gaussian of std dev s onto the lattice
// 2 pi Z / L by cell integration, renormalized to `mass`.
void add_gaussian_1d(AtomicMeasure& mu, double s, double mass) {
  if (mass <= 0.0) return;
  const double w = 2.0 * kPi / mu.side;
  const auto mmax = static_cast<std::int64_t>(std::ceil(7.0 * s / w));
  std::vector<double> half(static_cast<std::size_t>(mmax) + 1);
  const double r = 1.0 / (std::sqrt(2.0) * s);
  for (std::int64_t m = 0; m <= mmax; ++m) {
    const double a = (static_cast<double>(m) - 0.5) * w;
    const double b = (static_cast<double>(m) + 0.5) * w;
    // erfc differences stay accurate in the far tail
    half[static_cast<std::size_t>(m)] = m == 0 ? std::erf(b * r) : 0.5 * (std::erfc(a * r) - std::erfc(b * r));
  }
  CompensatedSum total;
  total.add(half[0]);
  for (std::int64_t m = 1; m <= mmax; ++m) total.add(2.0 * half[static_cast<std::size_t>(m)]);
  const double scale = mass / total.value();
  for (std::int64_t m = -mmax; m <= mmax; ++m) {
    const double v = half[static_cast<std::size_t>(m < 0 ? -m : m)] * scale;
    if (v > 0.0) {
      mu.support.emplace_back(m);
      mu.weights.push_back(v);
    }
  }
}

void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::InvalidParams, "measure family: " + what);
}

AtomicMeasure empty_measure(int dim, double L) {
  if (!(L > 0.0)) fail(ErrorCode::InvalidArgument, "measure family: L must be positive");
  AtomicMeasure mu;
  mu.dim = dim;
  mu.side = L;
  return mu;
}

AtomicMeasure crystal_measure(const FamilyParams& p, double L) {
  AtomicMeasure mu = empty_measure(p.dim, L);
  for (std::size_t j = 0; j < p.points.size(); ++j) {
    DualVector q = DualVector::zero(p.dim);
    for (int i = 0; i < p.dim; ++i) q[i] = static_cast<std::int64_t>(std::llround(p.points[j][static_cast<std::size_t>(i)] * L / (2.0 * kPi)));
    mu.support.push_back(q);
    mu.weights.push_back(p.weights[j]);
  }
  mu.normalize_order();
  return mu;
}

}  // namespace

MeasureFamily example_family(FamilyKind kind, const FamilyParams& params) {
  const FamilyParams p = params;
  require(p.dim >= 1 && p.dim <= 3, "dim must be 1, 2 or 3");
  MeasureFamily fam;
  fam.kind = kind;
  fam.params = p;
  if (kind == FamilyKind::Crystal) {
    require(!p.points.empty() && p.points.size() == p.weights.size(), "crystal needs matching points and weights");
    CompensatedSum total;
    for (double w : p.weights) {
      require(w >= 0.0, "crystal weights must be nonnegative");
      total.add(w);
    }
    require(std::abs(total.value() - 1.0) <= 1e-12, "crystal weights must sum to 1");
    for (std::size_t j = 0; j < p.points.size(); ++j) {
      bool mirrored = false;
      for (std::size_t k = 0; k < p.points.size(); ++k) {
        bool opposite = true;
        for (int i = 0; i < p.dim; ++i)
          opposite = opposite && std::abs(p.points[k][static_cast<std::size_t>(i)] + p.points[j][static_cast<std::size_t>(i)]) <= 1e-12;
        if (opposite && std::abs(p.weights[k] - p.weights[j]) <= 1e-15) mirrored = true;
      }
      require(mirrored, "crystal weights must be even under k -> -k");
    }
    fam.generate = [p](double L) { return crystal_measure(p, L); };
    return fam;
  }
  if (kind == FamilyKind::Escaping) {
    fam.generate = [p](double L) {
      AtomicMeasure mu = empty_measure(p.dim, L);
      DualVector q = DualVector::zero(p.dim);
      q[0] = std::max<std::int64_t>(1, std::llround(L * L / (2.0 * kPi)));
      mu.support = {-q, q};
      mu.weights = {0.5, 0.5};
      mu.normalize_order();
      return mu;
    };
    return fam;
  }
  require(p.dim == 1, std::string(family_kind_name(kind)) + " families are one-dimensional");
  require(p.width > 0.0 && p.rho > 0.0 && p.escape_scale > 0.0, "width, rho and escape_scale must be positive");
  double zero = 0.0, escaping = 0.0;
  switch (kind) {
    case FamilyKind::NormalFluid:
      require(p.gamma_inf > 0.0 && p.gamma_inf <= 1.0, "normal_fluid needs 0 < gamma_inf <= 1");
      escaping = p.gamma_inf;
      break;
    case FamilyKind::Superfluid:
      require(p.nu0 > 0.0 && p.gamma_inf >= 0.0 && p.nu0 + p.gamma_inf <= 1.0, "superfluid needs nu0 > 0, gamma_inf >= 0, sum <= 1");
      zero = p.nu0;
      escaping = p.gamma_inf;
      break;
    case FamilyKind::BecGas:
      require(p.nu0 > 0.0 && p.nu0 <= 1.0, "bec_gas needs 0 < nu0 <= 1");
      zero = p.nu0;
      break;
    default: break;
  }
  const double continuous = std::max(0.0, 1.0 - zero - escaping);
  fam.generate = [p, zero, escaping, continuous](double L) {
    AtomicMeasure mu = empty_measure(1, L);
    if (zero > 0.0) {
      mu.support.emplace_back(0);
      mu.weights.push_back(zero);
    }
    add_gaussian_1d(mu, p.width, continuous);
    add_gaussian_1d(mu, p.escape_scale * std::sqrt(p.rho * L), escaping);
    mu.normalize_order();
    return mu;
  };
  return fam;
}

LimitReport gamma_limit_report(const MeasureFamily& fam, const std::vector<double>& L_grid,
                               const std::vector<double>& kappa_grid, double far_field_x) {
  if (L_grid.size() < 3) fail(ErrorCode::InvalidArgument, "gamma_limit_report: need at least 3 L values");
  if (kappa_grid.empty()) fail(ErrorCode::InvalidArgument, "gamma_limit_report: empty kappa grid");
  for (std::size_t i = 1; i < L_grid.size(); ++i)
    if (!(L_grid[i] > L_grid[i - 1])) fail(ErrorCode::InvalidArgument, "gamma_limit_report: L grid must increase");
  for (std::size_t i = 1; i < kappa_grid.size(); ++i)
    if (!(kappa_grid[i] > kappa_grid[i - 1])) fail(ErrorCode::InvalidArgument, "gamma_limit_report: kappa grid must increase");
  if (!(kappa_grid.front() >= 0.0)) fail(ErrorCode::InvalidArgument, "gamma_limit_report: kappa must be >= 0");
  LimitReport rep;
  rep.L_grid = L_grid;
  rep.kappa_grid = kappa_grid;
  rep.limsup_L.assign(L_grid.begin() + static_cast<std::ptrdiff_t>(L_grid.size() / 2), L_grid.end());
  const auto measures = parallel_map<AtomicMeasure>(rep.limsup_L.size(), [&](std::size_t i) { return fam.generate(rep.limsup_L[i]); });
  rep.gamma.assign(kappa_grid.size(), 0.0);
  for (const AtomicMeasure& mu : measures) {
    for (std::size_t k = 0; k < kappa_grid.size(); ++k) rep.gamma[k] = std::max(rep.gamma[k], gamma_L(mu, kappa_grid[k]));
    rep.nu0 = std::max(rep.nu0, gamma_L(mu, 0.0));
  }
  for (std::size_t k = 1; k < rep.gamma.size(); ++k)
    if (rep.gamma[k] < rep.gamma[k - 1]) rep.monotone = false;
  rep.gamma_finite = std::min(1.0, rep.gamma.back());
  rep.gamma_inf = 1.0 - rep.gamma_finite;
  const double kmax = kappa_grid.back();
  std::size_t ref = 0;
  for (std::size_t k = 0; k < kappa_grid.size(); ++k)
    if (kappa_grid[k] <= 0.1 * kmax) ref = k;
  if (rep.gamma.back() - rep.gamma[ref] > 1e-3) {
    rep.plateau = false;
    rep.notes.push_back("no plateau: Gamma grows by " + format_double(rep.gamma.back() - rep.gamma[ref]) +
                        " over the top kappa decade");
  }
  rep.notes.push_back("limsup surrogate: max over the largest " + std::to_string(rep.limsup_L.size()) + " L values");
  rep.far_field_x = far_field_x;
  const KernelSamples f = fourier_transform(measures.back(), {Point{far_field_x, 0.0, 0.0}});
  rep.far_field_f = f.values.front().real();
  if (far_field_x > 0.5 * rep.limsup_L.back()) rep.notes.push_back("far-field point exceeds L/2 at the largest L");
  return rep;
}

std::string LimitReport::to_csv() const {
  std::ostringstream os;
  os << "kappa,gamma\n";
  for (std::size_t k = 0; k < kappa_grid.size(); ++k) os << format_double(kappa_grid[k]) << ',' << format_double(gamma[k]) << '\n';
  return os.str();
}

std::string LimitReport::to_json() const {
  nlohmann::ordered_json j;
  j["L_grid"] = L_grid;
  j["limsup_L"] = limsup_L;
  j["kappa_grid"] = kappa_grid;
  j["gamma"] = gamma;
  j["gamma_finite"] = gamma_finite;
  j["gamma_inf"] = gamma_inf;
  j["nu0"] = nu0;
  j["far_field"] = {{"x", far_field_x}, {"f", far_field_f}};
  j["monotone"] = monotone;
  j["plateau"] = plateau;
  j["notes"] = notes;
  return j.dump(1);
}

MollifiedValue mollified_limit(const MeasureFamily& fam, double lambda, const Point& x, const std::vector<double>& L_grid) {
  if (!(lambda > 0.0)) fail(ErrorCode::InvalidArgument, "mollified_limit: lambda must be positive");
  if (L_grid.empty()) fail(ErrorCode::InvalidArgument, "mollified_limit: empty L grid");
  MollifiedValue out;
  out.L = L_grid;
  out.values = parallel_map<double>(L_grid.size(), [&](std::size_t i) {
    const AtomicMeasure mu = fam.generate(L_grid[i]);
    CompensatedSum s;
    for (std::size_t j = 0; j < mu.size(); ++j) {
      double k2 = 0.0, kx = 0.0;
      for (int a = 0; a < mu.dim; ++a) {
        const double k = mu.support[j].wave(a, mu.side);
        k2 += k * k;
        kx += k * x[static_cast<std::size_t>(a)];
      }
      s.add(mu.weights[j] * std::cos(kx) * std::exp(-lambda * lambda * k2 / 4.0));
    }
    return s.value();
  });
  out.value = out.values.back();
  return out;
}

}  // namespace totmom
