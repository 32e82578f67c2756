#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "com.hpp"
#include "distribution.hpp"

namespace totmom {

// f_L(x) = sum_k phi(k) exp(-i k.x).
KernelSamples fourier_transform(const AtomicMeasure& mu, const std::vector<Point>& xs);

double gamma_L(const AtomicMeasure& mu, double kappa);

double dirichlet_kernel(int n, double x);
double fejer_kernel(int n, double x);
// (1/2pi) int_a^b F_n, split at the zeros 2 pi l / n.
double fejer_integral(int n, double a, double b);
// (1/2pi) int_{-alpha/n}^{alpha/n} F_n.
double fejer_central_mass(int n, double alpha);
// Lower bound on fejer_central_mass guaranteed for 0 < alpha <= 2 pi.
double fejer_central_lower_bound(double alpha);
// Smallest l0 >= 1 with (1 / (pi (1 - pi^2/12))) sum_{l >= l0} l^-2 <= eps / 2.
int fejer_l0(double epsilon);

// n^-d sum over l in [0, n-1]^d of the mass in the rectangle |k_i| <= 2 pi l_i / L.
double sigma_L(const AtomicMeasure& mu, int n);
// Same quantity from (2pi)^-d int f_L(L y / 2pi) prod F_n(y_i) dy (d = 1 only).
double sigma_L_fejer_integral(const AtomicMeasure& mu, int n);

enum class FamilyKind { Crystal, NormalFluid, Superfluid, BecGas, Escaping };

const char* family_kind_name(FamilyKind k) noexcept;
FamilyKind parse_family_kind(const std::string& name);

struct FamilyParams {
  int dim = 1;
  // crystal: points of the reciprocal lattice (wave-vector units) with weights
  std::vector<Point> points;
  std::vector<double> weights;
  double nu0 = 0.0;        // mass at k = 0 (superfluid, bec_gas)
  double gamma_inf = 0.0;  // mass escaping to infinity (normal_fluid, superfluid)
  double width = 1.0;      // standard deviation of the continuous Gaussian part
  double rho = 1.0;        // density setting the escape scale
  double escape_scale = 8.0;  // escaping width is escape_scale * sqrt(rho L^d)
};

struct MeasureFamily {
  FamilyKind kind = FamilyKind::Crystal;
  FamilyParams params;
  std::function<AtomicMeasure(double)> generate;
};

MeasureFamily example_family(FamilyKind kind, const FamilyParams& params);

struct LimitReport {
  std::vector<double> L_grid;
  std::vector<double> kappa_grid;
  std::vector<double> limsup_L;  // the part of the grid entering the limsup surrogate
  std::vector<double> gamma;     // per kappa
  double gamma_finite = 0.0;     // Gamma_{<inf}: value at the largest kappa
  double gamma_inf = 0.0;        // 1 - gamma_finite
  double nu0 = 0.0;              // limsup surrogate of Gamma_L(0)
  double far_field_x = 0.0;
  double far_field_f = 0.0;      // Re f_L(far_field_x) at the largest L
  bool monotone = true;
  bool plateau = true;
  std::vector<std::string> notes;

  std::string to_csv() const;
  std::string to_json() const;
};

LimitReport gamma_limit_report(const MeasureFamily& fam, const std::vector<double>& L_grid,
                               const std::vector<double>& kappa_grid, double far_field_x = 20.0);

struct MollifiedValue {
  std::vector<double> L;
  std::vector<double> values;
  double value = 0.0;  // at the largest L
};

// sum_k phi(k) exp(-i k.x) exp(-lambda^2 k^2 / 4) at each L.
MollifiedValue mollified_limit(const MeasureFamily& fam, double lambda, const Point& x, const std::vector<double>& L_grid);

}  // namespace totmom
