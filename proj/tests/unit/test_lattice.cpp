#include <doctest.h>

#include <set>

#include "error.hpp"
#include "lattice.hpp"
#include "numeric.hpp"

using namespace totmom;

TEST_CASE("irreducible set in one dimension") {
  BoxGeometry g(1, 2 * kPi, 3);
  auto s = irreducible_set(g);
  REQUIRE(s.size() == 3);
  CHECK(s[0] == DualVector(-1));
  CHECK(s[1] == DualVector(0));
  CHECK(s[2] == DualVector(1));
  CHECK(irreducible_set(BoxGeometry(1, 2 * kPi, 1)) == std::vector<DualVector>{DualVector(0)});
}

TEST_CASE("irreducible set in two dimensions has N^d points") {
  auto s = irreducible_set(BoxGeometry(2, 2 * kPi, 2));
  std::set<DualVector> got(s.begin(), s.end());
  std::set<DualVector> want{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  CHECK(got == want);
  for (int N = 1; N <= 6; ++N) {
    CHECK(irreducible_set(BoxGeometry(2, 3.0, N)).size() == static_cast<std::size_t>(N * N));
    CHECK(irreducible_set(BoxGeometry(3, 3.0, N)).size() == static_cast<std::size_t>(N * N * N));
  }
}

TEST_CASE("decomposition examples") {
  BoxGeometry g(1, 2 * kPi, 3);
  auto a = decompose_wavevector(DualVector(2), g);
  CHECK(a.q == DualVector(-1));
  CHECK(a.k == DualVector(1));
  auto b = decompose_wavevector(DualVector(-2), g);
  CHECK(b.q == DualVector(1));
  CHECK(b.k == DualVector(-1));
  auto z = decompose_wavevector(DualVector(0), g);
  CHECK(z.q.is_zero());
  CHECK(z.k.is_zero());
}

TEST_CASE("decomposition is the unique irreducible split") {
  for (int N = 1; N <= 7; ++N) {
    BoxGeometry g(2, 1.7, N);
    for (std::int64_t a = -25; a <= 25; ++a)
      for (std::int64_t b = -25; b <= 25; ++b) {
        DualVector Q(a, b);
        auto d = decompose_wavevector(Q, g);
        CHECK(is_irreducible(d.q, g));
        CHECK(d.q + static_cast<std::int64_t>(N) * d.k == Q);
        // brute force over nearby k
        int hits = 0;
        for (std::int64_t k0 = -30; k0 <= 30; ++k0)
          for (std::int64_t k1 = -30; k1 <= 30; ++k1)
            if (is_irreducible(Q - static_cast<std::int64_t>(N) * DualVector(k0, k1), g)) ++hits;
        CHECK(hits == 1);
      }
  }
}

TEST_CASE("wave vectors are recomputed from integers") {
  DualVector q(3, -2);
  CHECK(q.wave(0, 2.0) == doctest::Approx(3 * kPi));
  CHECK(q.wave(1, 2.0) == doctest::Approx(-2 * kPi));
  CHECK(q.norm_squared() == 13);
  CHECK(q.max_norm() == 3);
}

TEST_CASE("geometry validation") {
  CHECK_THROWS_AS(BoxGeometry(4, 1.0, 1), Error);
  CHECK_THROWS_AS(BoxGeometry(1, -1.0, 1), Error);
  CHECK_THROWS_AS(BoxGeometry(1, 1.0, 0), Error);
  auto g = BoxGeometry::from_density(2, 3.0, 2.0);
  CHECK(g.particles() == 18);
  CHECK(g.density() == doctest::Approx(2.0));
}

TEST_CASE("parallel_map is independent of thread count") {
  auto fn = [](std::size_t i) { return std::sin(static_cast<double>(i)) * 1e-3 + static_cast<double>(i); };
  set_worker_threads(1);
  auto a = parallel_map<double>(1000, fn);
  set_worker_threads(4);
  auto b = parallel_map<double>(1000, fn);
  set_worker_threads(1);
  CHECK(a == b);
}

TEST_CASE("compensated sum recovers cancelled mass") {
  CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 10; ++i) s.add(1e-16);
  s.add(-1.0);
  CHECK(s.value() == doctest::Approx(1e-15).epsilon(1e-6));
}

TEST_CASE("format_double round trips") {
  for (double x : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 67.13915678809069}) CHECK(std::stod(format_double(x)) == x);
}
