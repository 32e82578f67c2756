#pragma once

#include <optional>
#include <string>
#include <vector>

#include "com.hpp"
#include "measure.hpp"
#include "spectrum.hpp"

namespace totmom {

struct FlowParams {
  double T = 0.0;
  double T_s = 1.0;
  double eta = 1.0;
  double mass = 1.0;
  double v = 0.0;
  double kB = 1.0;

  void validate() const;
};

// T + eta m v^2 (1 - alpha^2) / k_B.
double heating_temperature(const FlowParams& fp, double alpha);
double steady_temperature(const FlowParams& fp);
// sqrt(k_B (T_s - T) / (eta m)).
double critical_velocity(const FlowParams& fp);

struct RelaxationStep {
  double t = 0.0;
  double alpha = 1.0;
  double T_t = 0.0;
  bool collapsed = false;  // T_t >= T_s
};

struct RelaxationSeries {
  std::vector<RelaxationStep> steps;
  std::optional<std::size_t> first_collapse;
  std::string to_csv() const;
};

RelaxationSeries relaxation_series(const FlowParams& fp, const std::vector<std::pair<double, double>>& schedule);

// CSV rows (T, v_cr) over an even grid from T_min to fp.T_s.
std::string critical_velocity_curve_csv(const FlowParams& fp, double T_min, int points);

enum class DispersionKind { Phonon, Roton, PhononRoton, Tabulated };

struct ModelDispersion {
  DispersionKind kind = DispersionKind::Phonon;
  double c = 1.0;
  double Delta = 0.0;
  double mu = 1.0;
  double q_r = 0.0;
  double hbar = 1.0;
  std::vector<std::pair<double, double>> table;  // (|q|, eps), ascending in |q|

  double energy(double q) const;  // as a function of |q|
  void validate() const;
};

DispersionKind parse_dispersion_kind(const std::string& name);

struct LandauResult {
  std::vector<Point> excitable;
  double grid_velocity = 0.0;              // min over the grid of eps / (hbar |q|)
  std::optional<double> analytic_velocity;  // closed form for phonon / roton kinds
  double landau_velocity = 0.0;            // analytic when available
  std::string scan_csv;                     // q, eps, eps - hbar |q| |v|
};

LandauResult landau_excitability(const ModelDispersion& disp, const Point& v, const std::vector<Point>& q_grid, int dim = 3);

// Analytic minimum of (Delta + hbar^2 (q - q_r)^2 / 2 mu) / (hbar q) over q > 0.
double roton_landau_velocity(const ModelDispersion& disp);

struct BoostSetReport {
  DualVector k;
  std::vector<DualVector> window;
  double max_term_residual = 0.0;  // term by term, |E_{q+Nk,0} - E_{q,0} - shift|
  double max_set_residual = 0.0;   // after sorting both multisets
  bool multiset_equal = false;
  std::vector<std::size_t> permutation;  // energy rank before the boost -> rank after
  bool identity = true;

  std::string to_json() const;
};

// Window defaults to every irreducible q present in the table.
BoostSetReport boost_set_equality_check(const SpectralTable& table, const DualVector& k,
                                        const std::vector<DualVector>& window = {}, double tol = 1e-12);

struct TwoFluidWeights {
  double nu0 = 0.0;
  double continuous_mass = 0.0;
  double infinity_mass = 0.0;
};

TwoFluidWeights two_fluid_weights(const LimitReport& report);

}  // namespace totmom
