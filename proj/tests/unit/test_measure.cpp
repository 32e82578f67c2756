#include <doctest.h>

#include <cmath>
#include <random>

#include "error.hpp"
#include "measure.hpp"
#include "numeric.hpp"
#include "twofluid.hpp"

using namespace totmom;

namespace {

AtomicMeasure measure_1d(double L, std::vector<std::int64_t> m, std::vector<double> w) {
  AtomicMeasure mu;
  mu.dim = 1;
  mu.side = L;
  for (auto q : m) mu.support.emplace_back(q);
  mu.weights = std::move(w);
  mu.normalize_order();
  return mu;
}

// Closed-form Fejer kernel integrated by a composite midpoint rule.
double fejer_midpoint(int n, double a, double b, int steps) {
  const double h = (b - a) / steps;
  long double s = 0;
  for (int i = 0; i < steps; ++i) {
    const double x = a + (i + 0.5) * h;
    const double sx = std::sin(0.5 * x);
    s += std::abs(sx) < 1e-12 ? n : std::pow(std::sin(0.5 * n * x), 2) / (n * sx * sx);
  }
  return static_cast<double>(s) * h / (2 * kPi);
}

FamilyParams superfluid_params() {
  FamilyParams p;
  p.nu0 = 0.4;
  p.gamma_inf = 0.3;
  return p;
}

std::vector<double> kappa_grid(double kmax, int n = 61) {
  std::vector<double> k;
  for (int i = 0; i < n; ++i) k.push_back(kmax * i / (n - 1));
  return k;
}

const std::vector<double> kLgrid{64, 128, 256, 512, 1024};

}  // namespace

TEST_CASE("fourier transform of simple measures") {
  auto delta = measure_1d(10.0, {0}, {1.0});
  auto xs = line_points(1, {0, 0, 0}, {1, 0, 0}, 0.3, 20);
  for (auto& v : fourier_transform(delta, xs).values) CHECK(std::abs(v - 1.0) < 1e-15);
  auto pair = measure_1d(10.0, {-3, 3}, {0.5, 0.5});
  auto f = fourier_transform(pair, xs);
  const double k0 = 3 * 2 * kPi / 10.0;
  for (std::size_t p = 0; p < xs.size(); ++p) CHECK(std::abs(f.values[p] - std::cos(k0 * xs[p][0])) < 1e-14);
  // uniform window reproduces the Dirichlet kernel
  const int n = 4;
  std::vector<std::int64_t> m;
  for (int k = -n; k <= n; ++k) m.push_back(k);
  auto box = measure_1d(2 * kPi, m, std::vector<double>(m.size(), 1.0 / (2 * n + 1)));
  auto fb = fourier_transform(box, xs);
  for (std::size_t p = 0; p < xs.size(); ++p)
    CHECK(fb.values[p].real() * (2 * n + 1) == doctest::Approx(dirichlet_kernel(n, xs[p][0])).epsilon(1e-12));
}

TEST_CASE("gamma_L") {
  auto delta = measure_1d(10.0, {0}, {1.0});
  for (double k : {0.0, 0.5, 100.0}) CHECK(gamma_L(delta, k) == 1.0);
  auto pair = measure_1d(10.0, {-3, 3}, {0.5, 0.5});
  CHECK(gamma_L(pair, 1.0) == 0.0);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> pick(-20, 20);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 20; ++t) {
    std::vector<std::int64_t> m;
    std::vector<double> w;
    for (int i = 0; i < 10; ++i) {
      m.push_back(pick(rng));
      w.push_back(u(rng));
    }
    auto mu = measure_1d(7.0, m, w);
    const double kappa = 10 * u(rng);
    double direct = 0;
    for (std::size_t i = 0; i < m.size(); ++i)
      if (std::abs(2 * kPi * static_cast<double>(m[i]) / 7.0) <= kappa) direct += w[i];
    CHECK(gamma_L(mu, kappa) == doctest::Approx(direct).epsilon(1e-13));
  }
}

TEST_CASE("Dirichlet kernel") {
  for (int n : {0, 1, 5, 40}) CHECK(dirichlet_kernel(n, 0.0) == 2 * n + 1);
  CHECK(dirichlet_kernel(1, kPi) == doctest::Approx(-1.0).epsilon(1e-14));
  for (int n : {4, 16, 64, 256}) {
    const int steps = 400 * n;
    long double s = 0;
    for (int i = 0; i < steps; ++i) s += std::abs(dirichlet_kernel(n, -kPi + (i + 0.5) * 2 * kPi / steps));
    const double norm = static_cast<double>(s) / steps;
    const double r = norm / std::log(static_cast<double>(n));
    CHECK(r > 0.3);
    CHECK(r < 1.5);
  }
}

TEST_CASE("Fejer kernel") {
  for (int n : {1, 3, 10}) CHECK(fejer_kernel(n, 0.0) == doctest::Approx(n));
  for (int n : {2, 5, 9})
    for (int l = 1; l < n; ++l) CHECK(std::abs(fejer_kernel(n, 2 * kPi * l / n)) < 1e-12);
  for (int n : {1, 2, 7, 64}) CHECK(fejer_integral(n, -kPi, kPi) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fejer_integral(6, 0.1, 0.9) == doctest::Approx(fejer_midpoint(6, 0.1, 0.9, 200000)).epsilon(1e-8));
}

TEST_CASE("central Fejer mass") {
  CHECK(fejer_central_mass(2, std::sqrt(12.0)) >= 4 / (std::sqrt(3.0) * kPi));
  // often quoted as 0.734989; the exact value is 0.735105
  CHECK(std::abs(4 / (std::sqrt(3.0) * kPi) - 0.734989) < 2e-4);
  CHECK(fejer_central_mass(16, kPi) >= 1 - kPi * kPi / 36);
  CHECK(fejer_central_lower_bound(kPi) == doctest::Approx(0.72585).epsilon(1e-5));
  for (double a : {1e-3, 1e-2, 0.1}) {
    CHECK(fejer_central_mass(8, a) >= fejer_central_lower_bound(a));
    CHECK(fejer_central_mass(8, a) < 2 * a);
  }
  CHECK(fejer_central_mass(5, 1.3) == doctest::Approx(fejer_midpoint(5, -1.3 / 5, 1.3 / 5, 100000)).epsilon(1e-8));
}

TEST_CASE("Fejer l0") {
  const int l05 = fejer_l0(0.5);
  CHECK(l05 >= 1);
  CHECK(l05 <= 9);
  int prev = 1 << 30;
  for (double eps : {0.01, 0.05, 0.1, 0.3, 0.5, 0.9, 0.99}) {
    const int l = fejer_l0(eps);
    CHECK(l <= prev);
    prev = l;
  }
  for (int n = 2 * l05; n <= 64; ++n) CHECK(fejer_integral(n, -2 * kPi * l05 / n, 2 * kPi * l05 / n) >= 0.5);
  CHECK_THROWS_AS(fejer_l0(0.0), Error);
}

TEST_CASE("sigma_L against its definition and the Fejer form") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pick(-6, 6);
  std::uniform_real_distribution<double> u(0.05, 1);
  for (int t = 0; t < 30; ++t) {
    std::vector<std::int64_t> m;
    std::vector<double> w;
    double tot = 0;
    for (int i = 0; i < 4; ++i) {
      const std::int64_t q = pick(rng);
      const double x = u(rng);
      m.push_back(q);
      m.push_back(-q);
      w.push_back(x);
      w.push_back(x);
      tot += 2 * x;
    }
    for (double& x : w) x /= tot;
    auto mu = measure_1d(5.0, m, w);
    for (int n : {1, 2, 3, 7}) {
      double direct = 0;
      for (int l = 0; l < n; ++l)
        for (std::size_t i = 0; i < m.size(); ++i)
          if (std::abs(m[i]) <= l) direct += w[i];
      direct /= n;
      CHECK(sigma_L(mu, n) == doctest::Approx(direct).epsilon(1e-13));
      CHECK(sigma_L_fejer_integral(mu, n) == doctest::Approx(sigma_L(mu, n)).epsilon(1e-10));
    }
  }
  auto delta = measure_1d(5.0, {0}, {1.0});
  CHECK(sigma_L(delta, 3) <= gamma_L(delta, 0.0));
}

TEST_CASE("crystal family") {
  FamilyParams p;
  p.points = {{0, 0, 0}, {2 * kPi, 0, 0}, {-2 * kPi, 0, 0}};
  p.weights = {0.5, 0.25, 0.25};
  auto fam = example_family(FamilyKind::Crystal, p);
  auto rep = gamma_limit_report(fam, kLgrid, kappa_grid(6.0 + 2 * kPi));
  CHECK(rep.gamma_inf < 0.02);
  CHECK(rep.gamma.back() == doctest::Approx(1.0).epsilon(1e-14));
  auto mu = fam.generate(1024);
  auto xs = line_points(1, {0, 0, 0}, {1, 0, 0}, 0.05, 40);
  auto shifted = line_points(1, {1, 0, 0}, {1, 0, 0}, 0.05, 40);
  auto f = fourier_transform(mu, xs), g = fourier_transform(mu, shifted);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK(std::abs(f.values[i] - g.values[i]) < 0.01);
    CHECK(f.values[i].real() == doctest::Approx(0.5 + 0.5 * std::cos(2 * kPi * xs[i][0])).epsilon(1e-9));
  }
  CHECK(two_fluid_weights(rep).infinity_mass < 0.02);
  CHECK(mollified_limit(fam, 0.01, {0, 0, 0}, {1024}).value == doctest::Approx(1.0).epsilon(1e-3));
  p.weights = {0.5, 0.3, 0.2};
  CHECK_THROWS_AS(example_family(FamilyKind::Crystal, p), Error);
}

TEST_CASE("superfluid family recovers its weights") {
  auto fam = example_family(FamilyKind::Superfluid, superfluid_params());
  auto rep = gamma_limit_report(fam, kLgrid, kappa_grid(6.0));
  auto w = two_fluid_weights(rep);
  CHECK(w.nu0 == doctest::Approx(0.4).epsilon(0.05));
  CHECK(std::abs(w.nu0 - 0.4) < 0.02);
  CHECK(std::abs(w.continuous_mass - 0.3) < 0.02);
  CHECK(std::abs(w.infinity_mass - 0.3) < 0.02);
  CHECK(std::abs(rep.far_field_f - 0.4) < 0.02);
  // the escaping Gaussian survives the mollifier as 0.3 / sqrt(1 + lambda^2 s^2 / 2), s = 8 sqrt(L)
  CHECK(std::abs(mollified_limit(fam, 0.2, {0, 0, 0}, {1024}).value - 0.7) < 0.02);
  auto mu = fam.generate(256);
  CHECK(mu.evenness_defect() < 1e-15);
  CHECK(mu.total() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("other families") {
  FamilyParams nf;
  nf.gamma_inf = 0.2;
  auto normal = gamma_limit_report(example_family(FamilyKind::NormalFluid, nf), kLgrid, kappa_grid(6.0));
  CHECK(two_fluid_weights(normal).nu0 < 0.02);
  CHECK(std::abs(normal.gamma_inf - 0.2) < 0.02);
  FamilyParams bp;
  bp.nu0 = 0.6;
  auto bec = gamma_limit_report(example_family(FamilyKind::BecGas, bp), kLgrid, kappa_grid(6.0));
  CHECK(bec.gamma_inf < 0.02);
  CHECK(std::abs(bec.nu0 - 0.6) < 0.02);
  auto escfam = example_family(FamilyKind::Escaping, FamilyParams{});
  auto esc = gamma_limit_report(escfam, kLgrid, kappa_grid(6.0));
  CHECK(esc.gamma_inf > 0.98);
  CHECK(gamma_L(escfam.generate(512), 0.0) == 0.0);
  CHECK(mollified_limit(escfam, 1e3, {0, 0, 0}, {64}).value < 1e-12);
}
