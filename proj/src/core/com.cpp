#include "com.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "error.hpp"
#include "numeric.hpp"

namespace totmom {

namespace {

double phase_of(const DualVector& Q, const Point& x, double side) {
  double s = 0.0;
  for (int i = 0; i < Q.dim; ++i) s += static_cast<double>(Q[i]) * x[static_cast<std::size_t>(i)];
  return 2.0 * kPi * s / side;
}

std::complex<double> fourier_sum(const LatticeDistribution& dist, const Point& x,
                                 const std::function<double(const DualVector&)>* weight) {
  CompensatedSum re, im;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    double w = dist.weights[i];
    if (weight != nullptr) w *= (*weight)(dist.support[i]);
    if (w == 0.0) continue;
    const double th = phase_of(dist.support[i], x, dist.side);
    re.add(w * std::cos(th));
    im.add(w * std::sin(th));
  }
  return {re.value(), im.value()};
}

KernelSamples evaluate(const LatticeDistribution& dist, const std::vector<Point>& xs,
                       const std::function<double(const DualVector&)>* weight) {
  KernelSamples out;
  out.dim = dist.dim;
  out.side = dist.side;
  out.points = xs;
  out.values = parallel_map<std::complex<double>>(xs.size(), [&](std::size_t i) { return fourier_sum(dist, xs[i], weight); });
  return out;
}

}  // namespace

std::vector<Point> line_points(int dim, const Point& x0, const Point& dir, double step, std::size_t count) {
  std::vector<Point> out(count, Point{0.0, 0.0, 0.0});
  for (std::size_t i = 0; i < count; ++i)
    for (int k = 0; k < dim; ++k)
      out[i][static_cast<std::size_t>(k)] = x0[static_cast<std::size_t>(k)] + static_cast<double>(i) * step * dir[static_cast<std::size_t>(k)];
  return out;
}

std::string KernelSamples::to_csv() const {
  std::ostringstream os;
  static const char* names[] = {"x", "y", "z"};
  for (int i = 0; i < dim; ++i) os << names[i] << ',';
  os << "re,im\n";
  for (std::size_t p = 0; p < points.size(); ++p) {
    for (int i = 0; i < dim; ++i) os << format_double(points[p][static_cast<std::size_t>(i)]) << ',';
    os << format_double(values[p].real()) << ',' << format_double(values[p].imag()) << '\n';
  }
  return os.str();
}

std::string KernelSamples::to_json() const {
  nlohmann::ordered_json j;
  j["dim"] = dim;
  j["L"] = side;
  auto rows = nlohmann::ordered_json::array();
  for (std::size_t p = 0; p < points.size(); ++p) {
    std::vector<double> x(points[p].begin(), points[p].begin() + dim);
    rows.push_back({{"x", x}, {"re", values[p].real()}, {"im", values[p].imag()}});
  }
  j["samples"] = std::move(rows);
  return j.dump(1);
}

KernelSamples com_kernel(const LatticeDistribution& dist, const std::vector<Point>& xs) { return evaluate(dist, xs, nullptr); }

namespace {

PsdReport spectrum_of(const Eigen::MatrixXd& raw, double tol, double extra) {
  PsdReport rep;
  rep.asymmetry = (raw - raw.transpose()).cwiseAbs().maxCoeff();
  const Eigen::MatrixXd m = 0.5 * (raw + raw.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) fail(ErrorCode::NoConvergence, "psd_check: eigen solver failed");
  rep.min_eigenvalue = es.eigenvalues().minCoeff();
  rep.max_eigenvalue = es.eigenvalues().maxCoeff();
  rep.trace = m.trace();
  rep.tolerance = tol * std::abs(rep.trace) + extra;
  rep.pass = rep.min_eigenvalue >= -rep.tolerance;
  return rep;
}

}  // namespace

PsdReport psd_check(const LatticeDistribution& phi, const std::vector<DualVector>& samples, const PsdOptions& opts) {
  if (samples.empty()) fail(ErrorCode::InvalidArgument, "psd_check: no sample points");
  std::int64_t box = 0;
  for (const DualVector& q : phi.support) box = std::max(box, q.max_norm());
  const auto n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd m(n, n);
  std::size_t missing = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const DualVector d = samples[static_cast<std::size_t>(i)] - samples[static_cast<std::size_t>(j)];
      auto it = std::lower_bound(phi.support.begin(), phi.support.end(), d);
      if (it != phi.support.end() && *it == d) {
        m(i, j) = phi.weights[static_cast<std::size_t>(it - phi.support.begin())];
        continue;
      }
      m(i, j) = 0.0;
      ++missing;
      if (d.max_norm() > box && phi.deficit == 0.0 && !opts.missing_is_zero)
        fail(ErrorCode::IncompleteSupport, "psd_check: difference " + d.to_string() + " lies outside the support");
    }
  }
  PsdReport rep = spectrum_of(m, opts.tol, missing > 0 ? static_cast<double>(n) * phi.deficit : 0.0);
  rep.samples = samples;
  rep.missing = missing;
  return rep;
}

PsdReport psd_check(const std::function<double(const DualVector&)>& phi, const std::vector<DualVector>& samples,
                    double tol) {
  if (samples.empty()) fail(ErrorCode::InvalidArgument, "psd_check: no sample points");
  const auto n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = phi(samples[static_cast<std::size_t>(i)] - samples[static_cast<std::size_t>(j)]);
  PsdReport rep = spectrum_of(m, tol, 0.0);
  rep.samples = samples;
  return rep;
}

std::string PsdReport::to_json() const {
  nlohmann::ordered_json j;
  j["n"] = samples.size();
  j["min_eigenvalue"] = min_eigenvalue;
  j["max_eigenvalue"] = max_eigenvalue;
  j["trace"] = trace;
  j["asymmetry"] = asymmetry;
  j["tolerance"] = tolerance;
  j["missing"] = missing;
  j["pass"] = pass;
  return j.dump(1);
}

SubgroupLattice::SubgroupLattice(int dim, const std::vector<DualVector>& generators) : dim_(dim) {
  std::vector<DualVector> rows;
  for (const DualVector& g : generators) {
    if (g.dim != dim) fail(ErrorCode::InvalidArgument, "subgroup: generator dimension mismatch");
    if (!g.is_zero()) rows.push_back(g);
  }
  std::size_t top = 0;
  for (int c = 0; c < dim && top < rows.size(); ++c) {
    // Euclid on column c over rows[top..]
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t r = top; r < rows.size(); ++r)
        if (rows[r][c] != 0 && (best == rows.size() || std::abs(rows[r][c]) < std::abs(rows[best][c]))) best = r;
      if (best == rows.size()) break;
      bool reduced = false;
      for (std::size_t r = top; r < rows.size(); ++r) {
        if (r == best || rows[r][c] == 0) continue;
        rows[r] = rows[r] - (rows[r][c] / rows[best][c]) * rows[best];
        reduced = true;
      }
      if (!reduced) {
        std::swap(rows[top], rows[best]);
        if (rows[top][c] < 0) rows[top] = -rows[top];
        basis_.push_back(rows[top]);
        pivots_.push_back(c);
        ++top;
        break;
      }
    }
    rows.erase(std::remove_if(rows.begin() + static_cast<std::ptrdiff_t>(top), rows.end(),
                              [](const DualVector& v) { return v.is_zero(); }),
               rows.end());
  }
}

bool SubgroupLattice::contains(const DualVector& v) const {
  if (v.dim != dim_) return false;
  DualVector r = v;
  std::size_t b = 0;
  for (int c = 0; c < dim_; ++c) {
    if (b < basis_.size() && pivots_[b] == c) {
      if (r[c] % basis_[b][c] != 0) return false;
      r = r - (r[c] / basis_[b][c]) * basis_[b];
      ++b;
    } else if (r[c] != 0) {
      return false;
    }
  }
  return r.is_zero();
}

std::vector<DualVector> SubgroupLattice::sample(std::int64_t radius) const {
  std::set<DualVector> pts{DualVector::zero(dim_)};
  if (!basis_.empty()) {
    for (const DualVector& c : box_window(rank(), radius)) {
      DualVector v = DualVector::zero(dim_);
      for (int i = 0; i < rank(); ++i) v = v + c[i] * basis_[static_cast<std::size_t>(i)];
      pts.insert(v);
    }
  }
  return {pts.begin(), pts.end()};
}

KernelSamples restricted_reduction(const LatticeDistribution& dist, const std::vector<DualVector>& generators,
                                   const std::function<double(const DualVector&)>& phi, const std::vector<Point>& xs,
                                   double tol) {
  const SubgroupLattice sub(dist.dim, generators);
  if (sub.rank() > 3) fail(ErrorCode::InvalidArgument, "restricted_reduction: subgroup rank above 3");
  const PsdReport rep = psd_check(phi, sub.sample(sub.rank() <= 1 ? 4 : 1), tol);
  if (!rep.pass)
    fail(ErrorCode::NotPositiveDefinite,
         "restricted_reduction: phi is not positive definite on the subgroup (min eigenvalue " +
             format_double(rep.min_eigenvalue) + ")");
  const std::function<double(const DualVector&)> weight = [&](const DualVector& Q) {
    return sub.contains(Q) ? phi(Q) : 0.0;
  };
  return evaluate(dist, xs, &weight);
}

Point lattice_velocity(const DualVector& k, const BoxGeometry& geom, const Units& units) {
  Point v{0.0, 0.0, 0.0};
  for (int i = 0; i < geom.dim(); ++i) v[static_cast<std::size_t>(i)] = units.hbar * k.wave(i, geom.side()) / units.mass;
  return v;
}

namespace {

// m v / hbar as an integer dual vector, or an error.
DualVector velocity_to_lattice(const Point& v, const ThermalParams& th, const BoxGeometry& geom) {
  DualVector k = DualVector::zero(geom.dim());
  for (int i = 0; i < geom.dim(); ++i) {
    const double c = th.mass() * v[static_cast<std::size_t>(i)] / th.hbar() / geom.dual_spacing();
    const double r = std::round(c);
    if (std::abs(c - r) > 1e-9 * std::max(1.0, std::abs(c)))
      fail(ErrorCode::OffLatticeVelocity, "boost: m v / hbar is not on the dual lattice (component " +
                                              std::to_string(i) + " = " + format_double(c) + " x 2pi/L)");
    k[i] = static_cast<std::int64_t>(r);
  }
  return k;
}

}  // namespace

KernelSamples boosted_kernel(const LatticeDistribution& dist, const Point& v, const ThermalParams& th,
                             const BoxGeometry& geom, const std::vector<Point>& xs) {
  const DualVector k = velocity_to_lattice(v, th, geom);
  KernelSamples out = com_kernel(dist, xs);
  for (std::size_t p = 0; p < xs.size(); ++p) {
    // N m v.x / hbar = N k.x exactly on the lattice
    const double ph = -static_cast<double>(geom.particles()) * phase_of(k, xs[p], geom.side());
    out.values[p] *= std::polar(1.0, ph);
  }
  return out;
}

KernelSamples macroscopic_wavefunction(const LatticeDistribution& dist, const Point& v, const ThermalParams& th,
                                       const BoxGeometry& geom, double rho, const std::vector<Point>& xs, double slack) {
  if (!(rho > 0.0)) fail(ErrorCode::InvalidArgument, "macroscopic_wavefunction: rho must be positive");
  const DualVector k = velocity_to_lattice(v, th, geom);
  KernelSamples out = com_kernel(dist, xs);
  for (std::size_t p = 0; p < xs.size(); ++p) {
    const double re = out.values[p].real();
    if (re < -slack)
      fail(ErrorCode::NegativeKernel, "macroscopic_wavefunction: Re f = " + format_double(re) + " < 0 at sample " +
                                          std::to_string(p));
    const double ph = -0.5 * static_cast<double>(geom.particles()) * phase_of(k, xs[p], geom.side());
    out.values[p] = std::polar(std::sqrt(rho * std::max(re, 0.0)), ph);
  }
  return out;
}

Point velocity_from_phase(const KernelSamples& psi, std::int64_t particles, const Units& units, double max_step) {
  const std::size_t n = psi.points.size();
  if (n < 2 || psi.values.size() != n) fail(ErrorCode::InvalidArgument, "velocity_from_phase: need >= 2 samples");
  if (particles < 1) fail(ErrorCode::InvalidArgument, "velocity_from_phase: N must be >= 1");
  const int d = psi.dim;
  Point u{0.0, 0.0, 0.0};
  double len = 0.0;
  for (int i = 0; i < d; ++i) {
    u[static_cast<std::size_t>(i)] = psi.points[n - 1][static_cast<std::size_t>(i)] - psi.points[0][static_cast<std::size_t>(i)];
    len += u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
  }
  len = std::sqrt(len);
  if (!(len > 0.0)) fail(ErrorCode::InvalidArgument, "velocity_from_phase: sample line has zero length");
  for (double& c : u) c /= len;
  double amax = 0.0;
  for (const auto& z : psi.values) amax = std::max(amax, std::abs(z));
  std::vector<double> s(n), phase(n);
  for (std::size_t p = 0; p < n; ++p) {
    if (!(std::abs(psi.values[p]) > 1e-12 * amax) || amax == 0.0)
      fail(ErrorCode::ZeroAmplitude, "velocity_from_phase: |psi| vanishes at sample " + std::to_string(p));
    double proj = 0.0;
    for (int i = 0; i < d; ++i)
      proj += (psi.points[p][static_cast<std::size_t>(i)] - psi.points[0][static_cast<std::size_t>(i)]) * u[static_cast<std::size_t>(i)];
    s[p] = proj;
    if (p == 0) {
      phase[p] = std::arg(psi.values[p]);
    } else {
      const double inc = std::arg(psi.values[p] * std::conj(psi.values[p - 1]));
      if (std::abs(inc) > max_step)
        fail(ErrorCode::PhaseWrap, "velocity_from_phase: phase step " + format_double(inc) + " between samples " +
                                       std::to_string(p - 1) + " and " + std::to_string(p) + " is too large to unwrap");
      phase[p] = phase[p - 1] + inc;
    }
  }
  const double sm = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(n);
  const double pm = std::accumulate(phase.begin(), phase.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    sxy += (s[p] - sm) * (phase[p] - pm);
    sxx += (s[p] - sm) * (s[p] - sm);
  }
  const double slope = sxy / sxx;
  const double speed = -2.0 * units.hbar / (static_cast<double>(particles) * units.mass) * slope;
  Point v{0.0, 0.0, 0.0};
  for (int i = 0; i < d; ++i) v[static_cast<std::size_t>(i)] = speed * u[static_cast<std::size_t>(i)];
  return v;
}

}  // namespace totmom
