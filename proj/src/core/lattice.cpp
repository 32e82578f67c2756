#include "lattice.hpp"

#include <cmath>
#include <sstream>

#include "error.hpp"
#include "numeric.hpp"

namespace totmom {

Units Units::si_helium4() {
  Units u;
  u.hbar = 1.054571817e-34;
  u.mass = 6.6464731e-27;
  u.kB = 1.380649e-23;
  return u;
}

BoxGeometry::BoxGeometry(int dim, double side, std::int64_t particles) : dim_(dim), side_(side), particles_(particles) {
  if (dim < 1 || dim > 3) fail(ErrorCode::InvalidArgument, "geometry: dimension must be 1, 2 or 3");
  if (!(side > 0.0) || !std::isfinite(side)) fail(ErrorCode::InvalidArgument, "geometry: side length must be positive");
  if (particles < 1) fail(ErrorCode::InvalidArgument, "geometry: particle number must be >= 1");
}

double BoxGeometry::density() const noexcept { return static_cast<double>(particles_) / std::pow(side_, dim_); }

double BoxGeometry::dual_spacing() const noexcept { return 2.0 * kPi / side_; }

BoxGeometry BoxGeometry::from_density(int dim, double side, double rho) {
  if (!(rho > 0.0)) fail(ErrorCode::InvalidArgument, "geometry: density must be positive");
  const double n = rho * std::pow(side, dim);
  const double rounded = std::round(n);
  if (rounded < 1.0 || std::abs(n - rounded) > 1e-9 * std::max(1.0, rounded))
    fail(ErrorCode::InvalidArgument, "geometry: rho * L^d = " + format_double(n) + " is not a positive integer");
  return BoxGeometry(dim, side, static_cast<std::int64_t>(rounded));
}

DualVector DualVector::zero(int dim) {
  DualVector v;
  v.dim = dim;
  return v;
}

DualVector DualVector::from_span(const std::int64_t* coords, int dim) {
  DualVector v = zero(dim);
  for (int i = 0; i < dim; ++i) v[i] = coords[i];
  return v;
}

std::int64_t DualVector::norm_squared() const noexcept { return dot(*this); }

std::int64_t DualVector::max_norm() const noexcept {
  std::int64_t m = 0;
  for (int i = 0; i < dim; ++i) m = std::max(m, n[i] < 0 ? -n[i] : n[i]);
  return m;
}

std::int64_t DualVector::dot(const DualVector& o) const noexcept {
  std::int64_t s = 0;
  for (int i = 0; i < dim; ++i) s += n[i] * o.n[i];
  return s;
}

bool DualVector::is_zero() const noexcept {
  for (int i = 0; i < dim; ++i)
    if (n[i] != 0) return false;
  return true;
}

double DualVector::wave(int i, double side) const noexcept {
  return 2.0 * kPi * static_cast<double>(n[static_cast<std::size_t>(i)]) / side;
}

DualVector operator+(DualVector a, const DualVector& b) noexcept {
  for (int i = 0; i < a.dim; ++i) a.n[i] += b.n[i];
  return a;
}

DualVector operator-(DualVector a, const DualVector& b) noexcept {
  for (int i = 0; i < a.dim; ++i) a.n[i] -= b.n[i];
  return a;
}

DualVector operator-(DualVector a) noexcept {
  for (int i = 0; i < a.dim; ++i) a.n[i] = -a.n[i];
  return a;
}

DualVector operator*(std::int64_t s, DualVector a) noexcept {
  for (int i = 0; i < a.dim; ++i) a.n[i] *= s;
  return a;
}

std::string DualVector::to_string() const {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < dim; ++i) os << (i ? "," : "") << n[i];
  os << ')';
  return os.str();
}

bool is_irreducible(const DualVector& q, const BoxGeometry& geom) noexcept {
  if (q.dim != geom.dim()) return false;
  for (int i = 0; i < q.dim; ++i)
    if (!in_irreducible_range(q[i], geom.particles())) return false;
  return true;
}

std::vector<DualVector> irreducible_set(const BoxGeometry& geom) {
  const std::int64_t N = geom.particles();
  // integers m with -N < 2m <= N, i.e. m in [lo, hi]
  const std::int64_t hi = N / 2;
  const std::int64_t lo = hi - N + 1;
  std::vector<DualVector> out;
  const int d = geom.dim();
  DualVector cur = DualVector::zero(d);
  for (int i = 0; i < d; ++i) cur[i] = lo;
  while (true) {
    out.push_back(cur);
    int i = d - 1;
    while (i >= 0 && cur[i] == hi) {
      cur[i] = lo;
      --i;
    }
    if (i < 0) break;
    ++cur[i];
  }
  return out;
}

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

Decomposition decompose_wavevector(const DualVector& Q, const BoxGeometry& geom) {
  if (Q.dim != geom.dim()) fail(ErrorCode::InvalidArgument, "decompose: dimension mismatch");
  const std::int64_t N = geom.particles();
  Decomposition out{DualVector::zero(Q.dim), DualVector::zero(Q.dim)};
  for (int i = 0; i < Q.dim; ++i) {
    // k = ceil((2m - N) / 2N)
    const std::int64_t k = -floor_div(-(2 * Q[i] - N), 2 * N);
    out.k[i] = k;
    out.q[i] = Q[i] - N * k;
  }
  return out;
}

std::vector<DualVector> box_window(int dim, std::int64_t radius) {
  std::vector<DualVector> out;
  DualVector cur = DualVector::zero(dim);
  for (int i = 0; i < dim; ++i) cur[i] = -radius;
  while (true) {
    out.push_back(cur);
    int i = dim - 1;
    while (i >= 0 && cur[i] == radius) {
      cur[i] = -radius;
      --i;
    }
    if (i < 0) break;
    ++cur[i];
  }
  return out;
}

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Ok: return "ok";
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::InvalidDomain: return "invalid-domain";
    case ErrorCode::NoConvergence: return "no-convergence";
    case ErrorCode::CutoffTooSmall: return "cutoff-too-small";
    case ErrorCode::EnumerationGuard: return "blowup-guard";
    case ErrorCode::MissingZero: return "missing-zero";
    case ErrorCode::IncompleteSupport: return "incomplete-support";
    case ErrorCode::NotPositiveDefinite: return "phi-not-psd";
    case ErrorCode::OffLatticeVelocity: return "off-lattice-velocity";
    case ErrorCode::NegativeKernel: return "negative-kernel";
    case ErrorCode::PhaseWrap: return "phase-wrap";
    case ErrorCode::ZeroAmplitude: return "zero-amplitude";
    case ErrorCode::InvalidParams: return "invalid-params";
    case ErrorCode::ScheduleNotMonotone: return "schedule-not-monotone";
    case ErrorCode::WindowNotClosed: return "window-not-closed";
    case ErrorCode::Config: return "config";
    case ErrorCode::Io: return "io";
    case ErrorCode::Internal: return "internal";
  }
  return "unknown";
}

}  // namespace totmom
