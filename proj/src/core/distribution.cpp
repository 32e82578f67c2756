#include "distribution.hpp"

#include <algorithm>
#include <cmath>

#include "numeric.hpp"

namespace totmom {

double LatticeDistribution::weight_of(const DualVector& Q) const noexcept {
  auto it = std::lower_bound(support.begin(), support.end(), Q);
  if (it == support.end() || *it != Q) return 0.0;
  return weights[static_cast<std::size_t>(it - support.begin())];
}

bool LatticeDistribution::contains(const DualVector& Q) const noexcept {
  return std::binary_search(support.begin(), support.end(), Q);
}

double LatticeDistribution::total() const { return compensated_total(weights); }

double LatticeDistribution::evenness_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i)
    worst = std::max(worst, std::abs(weights[i] - weight_of(-support[i])));
  return worst;
}

void LatticeDistribution::normalize_order() {
  std::vector<std::size_t> idx(support.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return support[a] < support[b]; });
  std::vector<DualVector> s;
  std::vector<double> w;
  s.reserve(idx.size());
  w.reserve(idx.size());
  for (std::size_t i : idx) {
    if (!s.empty() && s.back() == support[i]) {
      w.back() += weights[i];
    } else {
      s.push_back(support[i]);
      w.push_back(weights[i]);
    }
  }
  support = std::move(s);
  weights = std::move(w);
}

std::int64_t kappa_to_index(double kappa, double side) noexcept {
  if (kappa < 0.0) return -1;
  const double m = kappa * side / (2.0 * kPi) * (1.0 + 1e-12);
  if (m > 9.0e18) return static_cast<std::int64_t>(9.0e18);
  return static_cast<std::int64_t>(std::floor(m));
}

double lattice_cdf(const LatticeDistribution& dist, double kappa) {
  const std::int64_t m = kappa_to_index(kappa, dist.side);
  double s = 0.0;  // plain ordered summation keeps the result monotone in kappa
  for (std::size_t i = 0; i < dist.size(); ++i)
    if (dist.support[i].max_norm() <= m) s += dist.weights[i];
  return s;
}

}  // namespace totmom
