#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "distribution.hpp"
#include "lattice.hpp"
#include "theta.hpp"

namespace totmom {

enum class Statistics { Boltzmann, Bose, Fermi };

const char* statistics_name(Statistics s) noexcept;
Statistics parse_statistics(std::string_view name);

// One eigenstate label of the free Hamiltonian: mode occupation numbers, kept
// sorted by mode.
struct OccupationState {
  std::vector<std::pair<DualVector, int>> occupancy;
  std::int64_t energy_index = 0;  // sum count * |n|^2, energy is this times the unit
  DualVector momentum;
  // Number of ordered single-particle tuples mapping to this occupancy
  // (multinomial, Boltzmann only; 1 otherwise).
  double multiplicity = 1.0;
};

// hbar^2 (2 pi / L)^2 / 2m.
double energy_unit(const BoxGeometry& geom, const Units& units) noexcept;

struct EnumerationOptions {
  double guard = 1e8;  // maximal number of states produced
};

// Calls `visit` for every occupation state of energy <= e_max. Visiting order is
// deterministic but not sorted; enumerate_spectrum sorts afterwards.
void for_each_state(const BoxGeometry& geom, Statistics stats, double e_max, const Units& units,
                    const std::function<void(const OccupationState&)>& visit, const EnumerationOptions& opts = {});

class SpectralTable {
public:
  using Levels = std::vector<double>;

  SpectralTable(BoxGeometry geom, Statistics stats, Units units, double e_max);

  const BoxGeometry& geometry() const noexcept { return geom_; }
  Statistics statistics() const noexcept { return stats_; }
  const Units& units() const noexcept { return units_; }
  double e_max() const noexcept { return e_max_; }

  const std::map<DualVector, Levels>& entries() const noexcept { return entries_; }
  std::map<DualVector, Levels>& mutable_entries() noexcept { return entries_; }
  const Levels* find(const DualVector& Q) const noexcept;
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t level_count() const noexcept;
  double min_energy() const;

  // Certified bound on the neglected Boltzmann weight exp(-beta E) summed over
  // states above e_max, at the reference beta it was computed for.
  std::optional<double> reference_beta() const noexcept { return reference_beta_; }
  double tail_bound() const noexcept { return tail_bound_; }
  void set_tail_bound(double beta, double bound) {
    reference_beta_ = beta;
    tail_bound_ = bound;
  }

private:
  BoxGeometry geom_;
  Statistics stats_;
  Units units_;
  double e_max_;
  std::map<DualVector, Levels> entries_;
  std::optional<double> reference_beta_;
  double tail_bound_ = 0.0;
};

// Boltzmann states appear with their multinomial multiplicity, i.e. each
// distinguishable-particle eigenstate is listed once.
SpectralTable enumerate_spectrum(const BoxGeometry& geom, Statistics stats, double e_max,
                                 const Units& units = Units::natural(), const EnumerationOptions& opts = {});

// Same, and stores the certified tail bound for `reference`.
SpectralTable enumerate_spectrum(const BoxGeometry& geom, Statistics stats, double e_max, const ThermalParams& reference,
                                 const EnumerationOptions& opts = {});

// log of a certified upper bound on sum_{E > e_max} exp(-beta E) over all N-particle
// states (any statistics).
double log_truncation_tail(const BoxGeometry& geom, const ThermalParams& th, double e_max);

struct PartitionFunctions {
  double Z = 0.0;
  double Z_irred = 0.0;
  double tail = 0.0;  // bound on the weight missing from Z
  // Same quantities multiplied by exp(beta E_min); finite even when Z underflows.
  double Z_shifted = 0.0;
  double Z_irred_shifted = 0.0;
  double tail_shifted = 0.0;
  double ratio() const noexcept { return Z_shifted / Z_irred_shifted; }
  // Upper bound on the relative mass missing from the table.
  double relative_deficit() const noexcept { return tail_shifted / (Z_shifted + tail_shifted); }
};

PartitionFunctions partition_functions(const SpectralTable& table, const ThermalParams& th);

MomentumDistribution nu_distribution(const SpectralTable& table, const ThermalParams& th);

// Independent route for distinguishable particles: N-fold convolution of the
// single-particle Gibbs law, truncated where the one-dimensional tail falls
// below tol.
MomentumDistribution boltzmann_convolution_oracle(const BoxGeometry& geom, const ThermalParams& th, double tol = 1e-17);

// Canonical recursion W_n = (1/n) sum_j s_j (c_j * W_{n-j}) over the cycle
// structure. Reaches N far beyond enumeration; deficit is an estimate from the
// single-particle truncation.
MomentumDistribution canonical_distribution(const BoxGeometry& geom, Statistics stats, const ThermalParams& th,
                                            double tol = 1e-17);

double gamma_cdf(const MomentumDistribution& dist, double kappa);

LatticeDistribution occupation_expectation(const BoxGeometry& geom, Statistics stats, const ThermalParams& th,
                                           double e_max, const EnumerationOptions& opts = {});

struct OmegaResult {
  std::map<DualVector, double> omega;
  std::map<DualVector, double> x;
  DualVector q_max;
};

OmegaResult omega_and_argmax(const SpectralTable& table, const ThermalParams& th);

std::map<DualVector, double> epsilon_dispersion(const SpectralTable& table);

struct GalileanReport {
  double max_residual = 0.0;
  std::size_t pairs_compared = 0;
  std::size_t levels_compared = 0;
  bool empty = true;  // no pair was comparable
};

// Over every Q in the table and every boost k with max-norm <= k_radius.
GalileanReport galilean_check(const SpectralTable& table, std::int64_t k_radius = 2);
GalileanReport galilean_check(const SpectralTable& table, const std::vector<DualVector>& boosts);

SpectralTable boost_table(const SpectralTable& table, const DualVector& k);

}  // namespace totmom
