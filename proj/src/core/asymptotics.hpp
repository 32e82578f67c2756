#pragma once

#include <string>
#include <vector>

#include "spectrum.hpp"

namespace totmom {

// F_{2J-1}: probability that |Q_axis| > (2J-1) pi N / L. Axis is 1-based.
double tail_probability(const MomentumDistribution& dist, const BoxGeometry& geom, int J, int axis = 1);

// (lambda rho / pi) int_0^x exp(-lambda^2 rho^2 y^2 / 4 pi) dy by adaptive quadrature.
double clt_reference_cdf(double x, const ThermalParams& th, double rho);

// CDF of |Q| after spreading each lattice mass uniformly over its dual cell
// [Q - pi/L, Q + pi/L]. Continuous, so it can be compared pointwise with a
// continuous limit law. t is in wave-vector units.
double cell_smoothed_abs_cdf(const MomentumDistribution& dist, double t);

struct CltRow {
  std::int64_t N = 0;
  double L = 0.0;
  double sup_distance = 0.0;      // cell-smoothed CDF against the reference
  double raw_sup_distance = 0.0;  // step CDF against the reference on the same grid
  double deficit = 0.0;
};

struct CltReport {
  Statistics stats = Statistics::Boltzmann;
  double rho = 0.0;
  double lambda = 0.0;
  std::vector<double> x_grid;
  std::vector<CltRow> rows;

  std::string to_csv() const;
  std::string to_json() const;
};

// Fixed grid of `points` values spanning [0, 4 / (lambda rho)].
std::vector<double> clt_grid(const ThermalParams& th, double rho, int points = 200);

CltReport clt_convergence_report(const std::vector<BoxGeometry>& geoms, Statistics stats, const ThermalParams& th);

struct TailBounds {
  double lower = 0.0;
  double upper = 0.0;
};

TailBounds tail_bounds_2d(const ThermalParams& th, double rho, int J, double f_est);

// (Z_irred / Z) < sum_j exp(-pi lambda^2 rho j^2) cosh(lambda^2 q_2 j / L) >_irred,
// with Z expressed through the gauss sums of the irreducible sector.
double f_estimator_2d(const SpectralTable& table, const BoxGeometry& geom, const ThermalParams& th);

}  // namespace totmom
