#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "com.hpp"
#include "error.hpp"
#include "numeric.hpp"
#include "spectrum.hpp"
#include "theta.hpp"

using namespace totmom;

namespace {

const BoxGeometry kToy(1, 2 * kPi, 2);

MomentumDistribution toy_nu(Statistics s, double beta = 1.0, double e_max = 30.0) {
  ThermalParams th(beta);
  return nu_distribution(enumerate_spectrum(kToy, s, e_max, th), th);
}

std::complex<double> direct_f(const MomentumDistribution& d, double x) {
  std::complex<double> s = 0;
  for (std::size_t i = 0; i < d.size(); ++i) s += d.weights[i] * std::polar(1.0, d.support[i].wave(0, d.side) * x);
  return s;
}

std::vector<Point> line(double step, std::size_t n) { return line_points(1, {0, 0, 0}, {1, 0, 0}, step, n); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Ok;
}

}  // namespace

TEST_CASE("com kernel basic properties") {
  auto nu = toy_nu(Statistics::Bose);
  auto xs = line(0.37, 40);
  auto f = com_kernel(nu, xs);
  CHECK(f.values[0].real() == doctest::Approx(1.0 - nu.deficit).epsilon(1e-14));
  for (std::size_t p = 0; p < xs.size(); ++p) {
    CHECK(std::abs(f.values[p]) <= 1.0 + 1e-14);
    CHECK(std::abs(f.values[p] - direct_f(nu, xs[p][0])) < 1e-14);
  }
  auto neg = com_kernel(nu, line_points(1, {0, 0, 0}, {-1, 0, 0}, 0.37, 40));
  for (std::size_t p = 0; p < xs.size(); ++p) CHECK(std::abs(neg.values[p] - std::conj(f.values[p])) < 1e-14);
}

TEST_CASE("one Boltzmann particle gives the periodic heat kernel shape") {
  BoxGeometry g(1, 3.0, 1);
  ThermalParams th(0.4);
  auto nu = nu_distribution(enumerate_spectrum(g, Statistics::Boltzmann, 2000.0, th), th);
  auto xs = line(0.1, 31);
  auto f = com_kernel(nu, xs);
  std::vector<double> zero{0.0};
  const double k0 = heat_kernel_periodic(zero, zero, 0.2, g);
  for (std::size_t p = 0; p < xs.size(); ++p) {
    std::vector<double> x{xs[p][0]};
    CHECK(f.values[p].real() > 0.0);
    CHECK(f.values[p].real() / f.values[0].real() == doctest::Approx(heat_kernel_periodic(x, zero, 0.2, g) / k0).epsilon(1e-10));
  }
}

TEST_CASE("psd check on toy tables") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick(-3, 3);
  for (auto s : {Statistics::Bose, Statistics::Boltzmann})
    for (double beta : {0.3, 1.0, 4.0}) {
      auto nu = toy_nu(s, beta, 60.0 / beta);
      for (int trial = 0; trial < 5; ++trial) {
        std::vector<DualVector> qs;
        for (int i = 0; i < 8; ++i) qs.emplace_back(pick(rng));
        auto rep = psd_check(nu, qs);
        CHECK(rep.pass);
        CHECK(rep.min_eigenvalue >= -1e-10 * rep.trace);
      }
    }
}

TEST_CASE("psd check rejects corrupted input") {
  auto nu = toy_nu(Statistics::Bose);
  auto bad = nu;
  for (std::size_t i = 0; i < bad.size(); ++i)
    if (bad.support[i].is_zero()) bad.weights[i] = -bad.weights[i];
  CHECK_FALSE(psd_check(bad, box_window(1, 2)).pass);
  // negating the odd weights only translates f by pi, so corrupt the 2x2 minor instead
  auto big = nu;
  for (std::size_t i = 0; i < big.size(); ++i)
    if (big.support[i].max_norm() == 1) big.weights[i] = 1.5 * nu.weight_of(DualVector(0));
  CHECK_FALSE(psd_check(big, box_window(1, 2)).pass);
  auto single = psd_check(nu, {DualVector(0)});
  CHECK(single.pass);
  CHECK(single.min_eigenvalue == doctest::Approx(nu.weight_of(DualVector(0))));
  auto neg0 = psd_check([](const DualVector&) { return -1.0; }, {DualVector(0)});
  CHECK_FALSE(neg0.pass);
}

TEST_CASE("psd check needs the support to cover the differences") {
  MomentumDistribution d;
  d.side = 1.0;
  d.support = {DualVector(-1), DualVector(0), DualVector(1)};
  d.weights = {0.25, 0.5, 0.25};
  CHECK(code_of([&] { psd_check(d, {DualVector(0), DualVector(3)}); }) == ErrorCode::IncompleteSupport);
  CHECK(psd_check(d, {DualVector(0), DualVector(3)}, PsdOptions{1e-10, true}).pass);
  d.deficit = 1e-3;
  auto rep = psd_check(d, {DualVector(0), DualVector(3)});
  CHECK(rep.missing == 2);
  CHECK(rep.pass);
}

TEST_CASE("subgroup membership") {
  SubgroupLattice even(2, {DualVector(2, 0), DualVector(0, 2)});
  CHECK(even.rank() == 2);
  CHECK(even.contains(DualVector(4, -6)));
  CHECK_FALSE(even.contains(DualVector(1, 0)));
  SubgroupLattice diag(2, {DualVector(3, 3), DualVector(6, 9)});
  CHECK(diag.rank() == 2);
  CHECK(diag.contains(DualVector(0, 3)));
  CHECK(diag.contains(DualVector(3, 0)));
  CHECK_FALSE(diag.contains(DualVector(1, 1)));
  SubgroupLattice line1(2, {DualVector(2, 4), DualVector(3, 6)});
  CHECK(line1.rank() == 1);
  CHECK(line1.contains(DualVector(1, 2)));
  CHECK_FALSE(line1.contains(DualVector(2, 3)));
  // brute force against integer combinations
  SubgroupLattice g(2, {DualVector(4, 6), DualVector(6, 4)});
  for (int a = -12; a <= 12; ++a)
    for (int b = -12; b <= 12; ++b) {
      bool found = false;
      for (int s = -12; s <= 12 && !found; ++s)
        for (int t = -12; t <= 12 && !found; ++t) found = 4 * s + 6 * t == a && 6 * s + 4 * t == b;
      CHECK(g.contains(DualVector(a, b)) == found);
    }
}

TEST_CASE("restricted reduction") {
  auto nu = toy_nu(Statistics::Bose);
  auto xs = line(0.5, 12);
  auto delta = restricted_reduction(nu, {DualVector(1)}, [](const DualVector& q) { return q.is_zero() ? 1.0 : 0.0; }, xs);
  for (auto& v : delta.values) CHECK(std::abs(v - nu.weight_of(DualVector(0))) < 1e-15);
  auto full = restricted_reduction(nu, {DualVector(1)}, [](const DualVector&) { return 1.0; }, xs);
  auto f = com_kernel(nu, xs);
  for (std::size_t p = 0; p < xs.size(); ++p) CHECK(std::abs(full.values[p] - f.values[p]) < 1e-14);
  auto even = restricted_reduction(nu, {DualVector(2)}, [](const DualVector&) { return 1.0; }, xs);
  for (std::size_t p = 0; p < xs.size(); ++p) {
    std::complex<double> s = 0;
    for (std::size_t i = 0; i < nu.size(); ++i)
      if (nu.support[i][0] % 2 == 0) s += nu.weights[i] * std::polar(1.0, static_cast<double>(nu.support[i][0]) * xs[p][0]);
    CHECK(std::abs(even.values[p] - s) < 1e-14);
    CHECK(even.values[p].real() >= -1e-12);
  }
  CHECK(code_of([&] {
          restricted_reduction(nu, {DualVector(1)}, [](const DualVector& q) { return q.is_zero() ? 0.0 : 1.0; }, xs);
        }) == ErrorCode::NotPositiveDefinite);
}

TEST_CASE("boosted kernel") {
  auto nu = toy_nu(Statistics::Bose);
  auto xs = line(0.3, 20);
  ThermalParams th(1.0);
  auto f = com_kernel(nu, xs);
  auto b0 = boosted_kernel(nu, {0, 0, 0}, th, kToy, xs);
  for (std::size_t p = 0; p < xs.size(); ++p) CHECK(std::abs(b0.values[p] - f.values[p]) < 1e-15);
  const Point v = lattice_velocity(DualVector(1), kToy, Units::natural());
  auto b = boosted_kernel(nu, v, th, kToy, xs);
  for (std::size_t p = 0; p < xs.size(); ++p) {
    CHECK(std::abs(b.values[p]) == doctest::Approx(std::abs(f.values[p])).epsilon(1e-13));
    if (std::abs(f.values[p]) > 1e-6) {
      const double want = std::arg(f.values[p]) - 2.0 * xs[p][0];
      CHECK(std::abs(std::remainder(std::arg(b.values[p]) - want, 2 * kPi)) < 1e-12);
    }
  }
  CHECK(code_of([&] { boosted_kernel(nu, {0.5, 0, 0}, th, kToy, xs); }) == ErrorCode::OffLatticeVelocity);
}

TEST_CASE("macroscopic wave function and velocity round trip") {
  auto nu = toy_nu(Statistics::Bose);
  ThermalParams th(1.0);
  auto xs = line(0.05, 17);
  auto f = com_kernel(nu, xs);
  auto psi0 = macroscopic_wavefunction(nu, {0, 0, 0}, th, kToy, 2.0, xs);
  for (std::size_t p = 0; p < xs.size(); ++p) {
    CHECK(psi0.values[p].imag() == 0.0);
    CHECK(psi0.values[p].real() >= 0.0);
    CHECK(std::norm(psi0.values[p]) == doctest::Approx(2.0 * f.values[p].real()).epsilon(1e-13));
  }
  const Point zero = velocity_from_phase(psi0, 2, Units::natural());
  CHECK(std::abs(zero[0]) < 1e-14);
  for (std::int64_t k : {-2, -1, 1, 3}) {
    const Point v = lattice_velocity(DualVector(k), kToy, Units::natural());
    auto psi = macroscopic_wavefunction(nu, v, th, kToy, 1.0, xs);
    CHECK(velocity_from_phase(psi, 2, Units::natural())[0] == doctest::Approx(v[0]).epsilon(1e-10));
  }
  // phase step N k dx / 2 = 3 * 1.2 / 2 > 3 pi / 4
  const Point fast = lattice_velocity(DualVector(3), kToy, Units::natural());
  auto coarse = macroscopic_wavefunction(nu, fast, th, kToy, 1.0, line(1.2, 5));
  CHECK(code_of([&] { velocity_from_phase(coarse, 2, Units::natural()); }) == ErrorCode::PhaseWrap);
}

TEST_CASE("negative kernel is reported") {
  MomentumDistribution pair;
  pair.side = 2 * kPi;
  pair.support = {DualVector(-1), DualVector(1)};
  pair.weights = {0.5, 0.5};
  CHECK(code_of([&] {
          macroscopic_wavefunction(pair, {0, 0, 0}, ThermalParams(1.0), BoxGeometry(1, 2 * kPi, 1), 1.0, line(1.0, 4));
        }) == ErrorCode::NegativeKernel);
}
