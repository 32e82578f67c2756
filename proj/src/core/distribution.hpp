#pragma once

#include <span>
#include <vector>

#include "lattice.hpp"

namespace totmom {

// Nonnegative weights on the dual lattice of a box of side L, kept sorted by
// support point. Shared representation of the total-momentum law nu_Q, the
// occupation law n_k and the atomic measures phi_L.
struct LatticeDistribution {
  int dim = 1;
  double side = 1.0;
  std::vector<DualVector> support;
  std::vector<double> weights;
  // Certified (or, where documented, estimated) bound on the mass missing from
  // the support because of truncation.
  double deficit = 0.0;

  std::size_t size() const noexcept { return support.size(); }
  double weight_of(const DualVector& Q) const noexcept;
  bool contains(const DualVector& Q) const noexcept;
  double total() const;
  // Largest |phi(Q) - phi(-Q)| over the support.
  double evenness_defect() const;

  // Sorts by support point and merges duplicates.
  void normalize_order();
};

using MomentumDistribution = LatticeDistribution;
using AtomicMeasure = LatticeDistribution;

// sum of weights over max-norm |Q| <= kappa (real wave-vector units). Boundary
// points within a relative 1e-12 of kappa are included.
double lattice_cdf(const LatticeDistribution& dist, double kappa);

// Integer max-norm threshold equivalent to kappa on this lattice.
std::int64_t kappa_to_index(double kappa, double side) noexcept;

}  // namespace totmom
