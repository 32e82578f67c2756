#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace totmom {

// Physical constants live with the caller; the library is unit agnostic.
struct Units {
  double hbar = 1.0;
  double mass = 1.0;
  double kB = 1.0;

  static Units natural() { return {}; }
  static Units si_helium4();
};

// Periodic cube of side L in d dimensions holding N particles.
class BoxGeometry {
public:
  BoxGeometry(int dim, double side, std::int64_t particles);

  int dim() const noexcept { return dim_; }
  double side() const noexcept { return side_; }
  std::int64_t particles() const noexcept { return particles_; }
  double density() const noexcept;
  // Spacing 2*pi/L of the dual lattice.
  double dual_spacing() const noexcept;

  static BoxGeometry from_density(int dim, double side, double rho);

private:
  int dim_;
  double side_;
  std::int64_t particles_;
};

// Point of the dual lattice (2*pi/L) Z^d in integer coordinates.
struct DualVector {
  int dim = 1;
  std::array<std::int64_t, 3> n{0, 0, 0};

  DualVector() = default;
  explicit DualVector(std::int64_t n0) : dim(1), n{n0, 0, 0} {}
  DualVector(std::int64_t n0, std::int64_t n1) : dim(2), n{n0, n1, 0} {}
  DualVector(std::int64_t n0, std::int64_t n1, std::int64_t n2) : dim(3), n{n0, n1, n2} {}
  static DualVector zero(int dim);
  static DualVector from_span(const std::int64_t* coords, int dim);

  std::int64_t operator[](int i) const noexcept { return n[static_cast<std::size_t>(i)]; }
  std::int64_t& operator[](int i) noexcept { return n[static_cast<std::size_t>(i)]; }

  std::int64_t norm_squared() const noexcept;
  std::int64_t max_norm() const noexcept;
  std::int64_t dot(const DualVector& o) const noexcept;
  bool is_zero() const noexcept;
  // Real wave vector component (2*pi/L) n_i, recomputed on every call.
  double wave(int i, double side) const noexcept;

  friend DualVector operator+(DualVector a, const DualVector& b) noexcept;
  friend DualVector operator-(DualVector a, const DualVector& b) noexcept;
  friend DualVector operator-(DualVector a) noexcept;
  friend DualVector operator*(std::int64_t s, DualVector a) noexcept;
  friend bool operator==(const DualVector&, const DualVector&) = default;
  friend std::strong_ordering operator<=>(const DualVector&, const DualVector&) = default;

  std::string to_string() const;
};

struct Decomposition {
  DualVector q;  // irreducible part
  DualVector k;  // boost, Q = q + N k
};

// Integer condition for -pi N/L < q_i <= pi N/L on a coordinate m.
inline bool in_irreducible_range(std::int64_t m, std::int64_t N) noexcept { return -N < 2 * m && 2 * m <= N; }

bool is_irreducible(const DualVector& q, const BoxGeometry& geom) noexcept;

// Irreducible wave vectors in lexicographic order; exactly N^d of them.
std::vector<DualVector> irreducible_set(const BoxGeometry& geom);

Decomposition decompose_wavevector(const DualVector& Q, const BoxGeometry& geom);

// All integer vectors with max-norm <= radius, lexicographic.
std::vector<DualVector> box_window(int dim, std::int64_t radius);

}  // namespace totmom
