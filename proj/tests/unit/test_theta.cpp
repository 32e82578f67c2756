#include <doctest.h>

#include <cmath>
#include <vector>

#include "lattice.hpp"
#include "numeric.hpp"
#include "spectrum.hpp"
#include "theta.hpp"

using namespace totmom;

namespace {

// Plain truncated lattice sum in long double.
double direct_gauss_sum(const DualVector& q, const BoxGeometry& g, const ThermalParams& th) {
  const long double c = static_cast<long double>(th.lambda()) * th.lambda() / (4 * kPi) *
                        std::pow(2 * kPi / g.side(), 2);
  // N k^2 + 2 k.q >= N (|k| - 1)^2 - N for irreducible q
  const int K = static_cast<int>(std::ceil(std::sqrt(50.0 / static_cast<double>(c * g.particles())))) + 2;
  const int d = g.dim();
  long double s = 0;
  const int k1max = d > 1 ? K : 0, k2max = d > 2 ? K : 0;
  for (int a = -K; a <= K; ++a)
    for (int b = -k1max; b <= k1max; ++b)
      for (int e = -k2max; e <= k2max; ++e) {
        const long double k2 = static_cast<long double>(a) * a + static_cast<long double>(b) * b + static_cast<long double>(e) * e;
        long double kq = static_cast<long double>(a) * q[0];
        if (d > 1) kq += static_cast<long double>(b) * q[1];
        if (d > 2) kq += static_cast<long double>(e) * q[2];
        s += std::exp(-c * (static_cast<long double>(g.particles()) * k2 + 2 * kq));
      }
  return static_cast<double>(s);
}

double image_oracle(double u, double alpha, double L) {
  long double s = 0;
  for (int n = -200; n <= 200; ++n) {
    const long double z = u + static_cast<long double>(n) * L;
    s += std::exp(-z * z / (4 * static_cast<long double>(alpha)));
  }
  return static_cast<double>(s / std::sqrt(4 * kPi * alpha));
}

}  // namespace

TEST_CASE("gauss sum toy value") {
  BoxGeometry g(1, 2 * kPi, 2);
  ThermalParams th(2.0);  // lambda^2 / 4 pi = 1
  const double want = 1 + 2 * (std::exp(-2.0) + std::exp(-8.0) + std::exp(-18.0) + std::exp(-32.0));
  CHECK(gauss_sum(DualVector(0), g, th).value == doctest::Approx(want).epsilon(1e-14));
  // the commonly quoted 1.271377 is only good to about 3e-5
  CHECK(std::abs(want - 1.271377) < 5e-5);
}

TEST_CASE("gauss sum matches the direct lattice sum") {
  for (int d = 1; d <= 3; ++d)
    for (double L : {1.5, 4.0, 9.0})
      for (double beta : {0.05, 0.5, 3.0})
        for (std::int64_t N : {1, 2, 5}) {
          BoxGeometry g(d, L, N);
          ThermalParams th(beta);
          const auto qs = irreducible_set(g);
          for (std::size_t i = 0; i < qs.size(); i += d == 3 ? 17 : 1) {
            const double a = gauss_sum(qs[i], g, th).value;
            const double b = direct_gauss_sum(qs[i], g, th);
            CHECK(a == doctest::Approx(b).epsilon(1e-12));
          }
        }
}

TEST_CASE("gauss sum tends to one for long wavelengths") {
  BoxGeometry g(2, 3.0, 4);
  CHECK(gauss_sum(DualVector(0, 0), g, ThermalParams(1e4)).value == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("ratio bounds examples") {
  // d = 1, L = 100, lambda sqrt(rho) = 1
  BoxGeometry g(1, 100.0, 1);
  ThermalParams th = ThermalParams::from_lambda(10.0);
  auto b = ratio_bounds(g, th);
  CHECK(b.lower == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(b.upper == doctest::Approx(13.0).epsilon(1e-12));
  // d = 2: independent of L at fixed lambda^2 rho
  auto b1 = ratio_bounds(BoxGeometry(2, 10.0, 100), ThermalParams(0.3));
  auto b2 = ratio_bounds(BoxGeometry(2, 20.0, 400), ThermalParams(0.3));
  CHECK(b1.lower == doctest::Approx(b2.lower));
  CHECK(b1.upper == doctest::Approx(b2.upper));
  // d = 3, L large: upper tends to 27
  auto b3 = ratio_bounds(BoxGeometry(3, 1e6, 1000000000000000000), ThermalParams(1.0));
  CHECK(b3.upper == doctest::Approx(27.0).epsilon(1e-3));
  CHECK(b3.lower == 1.0);
}

TEST_CASE("gauss sums lie inside the ratio bounds") {
  for (int d = 1; d <= 3; ++d)
    for (double L : {2.0, 5.0})
      for (double beta : {0.1, 1.0, 10.0}) {
        BoxGeometry g(d, L, 3);
        ThermalParams th(beta);
        auto b = ratio_bounds(g, th);
        for (const auto& q : irreducible_set(g)) {
          const double s = gauss_sum(q, g, th).value;
          CHECK(s >= b.lower);
          CHECK(s <= b.upper);
        }
      }
}

TEST_CASE("average ratio agrees with Z over Z_irred") {
  BoxGeometry g(1, 2 * kPi, 2);
  ThermalParams th(1.0);
  auto table = enumerate_spectrum(g, Statistics::Boltzmann, 80.0, th);
  auto pf = partition_functions(table, th);
  CHECK(average_ratio(table, g, th) == doctest::Approx(pf.ratio()).epsilon(1e-12));
  BoxGeometry g1(1, 3.0, 1);
  auto t1 = enumerate_spectrum(g1, Statistics::Bose, 400.0, th);
  CHECK(average_ratio(t1, g1, th) == doctest::Approx(gauss_sum(DualVector(0), g1, th).value).epsilon(1e-14));
}

TEST_CASE("heat kernel representations agree") {
  for (double L : {1.0, 3.0, 10.0})
    for (double alpha = 1e-3 * L * L; alpha <= 10.0 * L * L; alpha *= 1.9)
      for (double u : {0.0, 0.1 * L, 0.37 * L, 0.5 * L, 0.93 * L}) {
        BoxGeometry g(1, L, 1);
        std::vector<double> x{u}, y{0.0};
        const double a = heat_kernel_dual_sum(x, y, alpha, g);
        const double b = heat_kernel_image_sum(x, y, alpha, g);
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
        CHECK(b == doctest::Approx(image_oracle(u, alpha, L)).epsilon(1e-12));
        CHECK(heat_kernel_periodic(x, y, alpha, g) > 0.0);
      }
}

TEST_CASE("heat kernel limits") {
  BoxGeometry g(2, 3.0, 1);
  std::vector<double> x{0.4, 1.1}, y{2.9, 0.2}, z{0.4, 1.1};
  CHECK(heat_kernel_periodic(x, y, 1e3, g) == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
  for (double alpha : {0.01, 0.1, 1.0}) CHECK(heat_kernel_periodic(x, z, alpha, g) > heat_kernel_periodic(x, y, alpha, g));
}
