#pragma once

#include <array>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "distribution.hpp"
#include "theta.hpp"

namespace totmom {

using Point = std::array<double, 3>;

struct KernelSamples {
  int dim = 1;
  double side = 1.0;
  std::vector<Point> points;
  std::vector<std::complex<double>> values;

  std::string to_csv() const;  // x..., re, im
  std::string to_json() const;
};

// Points x0 + i * step * dir for i in [0, count).
std::vector<Point> line_points(int dim, const Point& x0, const Point& dir, double step, std::size_t count);

// f(x) = sum_Q nu_Q exp(i Q.x).
KernelSamples com_kernel(const LatticeDistribution& dist, const std::vector<Point>& xs);

struct PsdReport {
  std::vector<DualVector> samples;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  double trace = 0.0;
  double asymmetry = 0.0;   // largest |M_ij - M_ji| before symmetrizing
  double tolerance = 0.0;   // pass iff min_eigenvalue >= -tolerance
  std::size_t missing = 0;  // differences absent from the support
  bool pass = false;

  std::string to_json() const;
};

struct PsdOptions {
  double tol = 1e-10;
  // Absent differences inside the support's bounding box are exact zeros; outside
  // it they need a certified deficit unless this is set.
  bool missing_is_zero = false;
};

// Gram matrix [phi(Q_i - Q_j)] and its spectrum. Absent differences count as 0;
// the deficit (a bound on each of them) widens the tolerance by n * deficit.
PsdReport psd_check(const LatticeDistribution& phi, const std::vector<DualVector>& samples, const PsdOptions& opts = {});
PsdReport psd_check(const std::function<double(const DualVector&)>& phi, const std::vector<DualVector>& samples,
                    double tol = 1e-10);

// Subgroup of Z^d generated by integer vectors, kept in echelon form.
class SubgroupLattice {
public:
  SubgroupLattice(int dim, const std::vector<DualVector>& generators);
  bool contains(const DualVector& v) const;
  int rank() const noexcept { return static_cast<int>(basis_.size()); }
  const std::vector<DualVector>& basis() const noexcept { return basis_; }
  // Combinations sum c_i b_i with |c_i| <= radius, deduplicated and sorted.
  std::vector<DualVector> sample(std::int64_t radius) const;

private:
  int dim_;
  std::vector<DualVector> basis_;
  std::vector<int> pivots_;
};

// sum over Q in the subgroup of phi(Q) nu_Q exp(i Q.x). phi is checked for
// positive definiteness on a sample of the subgroup first.
KernelSamples restricted_reduction(const LatticeDistribution& dist, const std::vector<DualVector>& generators,
                                   const std::function<double(const DualVector&)>& phi, const std::vector<Point>& xs,
                                   double tol = 1e-10);

// Velocity hbar k / m for an integer dual vector k.
Point lattice_velocity(const DualVector& k, const BoxGeometry& geom, const Units& units);

// exp(-i N m v.x / hbar) f(x); m v / hbar must be a dual lattice point.
KernelSamples boosted_kernel(const LatticeDistribution& dist, const Point& v, const ThermalParams& th,
                             const BoxGeometry& geom, const std::vector<Point>& xs);

// exp(-i N m v.x / 2 hbar) sqrt(rho max(Re f(x), 0)).
KernelSamples macroscopic_wavefunction(const LatticeDistribution& dist, const Point& v, const ThermalParams& th,
                                       const BoxGeometry& geom, double rho, const std::vector<Point>& xs,
                                       double slack = 1e-12);

// -(2 hbar / N m) times the least-squares slope of the unwrapped phase along the
// sample line. Steps whose wrapped phase increment exceeds max_step are
// rejected as aliased.
Point velocity_from_phase(const KernelSamples& psi, std::int64_t particles, const Units& units,
                          double max_step = 0.75 * 3.14159265358979323846);

}  // namespace totmom
