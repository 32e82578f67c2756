#pragma once

#include <span>

#include "lattice.hpp"

namespace totmom {

class SpectralTable;

class ThermalParams {
public:
  ThermalParams(double beta, const Units& units = Units::natural());

  double beta() const noexcept { return beta_; }
  double mass() const noexcept { return units_.mass; }
  double hbar() const noexcept { return units_.hbar; }
  const Units& units() const noexcept { return units_; }
  // Thermal wavelength sqrt(2 pi beta hbar^2 / m).
  double lambda() const noexcept;

  static ThermalParams from_lambda(double lambda, const Units& units = Units::natural());

private:
  double beta_;
  Units units_;
};

struct SeriesValue {
  double value = 0.0;
  double tail_bound = 0.0;  // certified bound on the neglected (relative) remainder
  long terms = 0;
};

// sum_{j >= from} exp(-a j^2) cosh(b j) for |b| <= a, truncated with the majorant
// exp(-a j (j-1)). `rel_tol` is relative to the partial sum. from == 0 means the
// full two-sided sum over Z.
SeriesValue theta_cosh_series(double a, double b, long from, double rel_tol);

// S(q) = sum_k exp(-(lambda^2/4pi)[N k^2 + 2 k.q]) for irreducible q.
SeriesValue gauss_sum(const DualVector& q, const BoxGeometry& geom, const ThermalParams& th, double rel_tol = 1e-15);

struct RatioBounds {
  double lower = 1.0;
  double upper = 1.0;
};

RatioBounds ratio_bounds(const BoxGeometry& geom, const ThermalParams& th);

// Z/Z_irred as the Boltzmann-weighted mean of gauss_sum over the irreducible
// entries of the table.
double average_ratio(const SpectralTable& table, const BoxGeometry& geom, const ThermalParams& th);

// Periodic heat kernel L^-d sum_k exp(-alpha k^2) exp(i k.(x-y)).
double heat_kernel_periodic(std::span<const double> x, std::span<const double> y, double alpha, const BoxGeometry& geom);
// The two representations, exposed for cross-checking.
double heat_kernel_dual_sum(std::span<const double> x, std::span<const double> y, double alpha, const BoxGeometry& geom);
double heat_kernel_image_sum(std::span<const double> x, std::span<const double> y, double alpha, const BoxGeometry& geom);
// alpha at which heat_kernel_periodic switches from image to dual sum.
double heat_kernel_switch_alpha(double side) noexcept;

}  // namespace totmom
