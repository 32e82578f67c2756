#include "spectrum.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <tuple>

#include "error.hpp"
#include "numeric.hpp"

namespace totmom {

const char* statistics_name(Statistics s) noexcept {
  switch (s) {
    case Statistics::Boltzmann: return "boltzmann";
    case Statistics::Bose: return "bose";
    case Statistics::Fermi: return "fermi";
  }
  return "unknown";
}

Statistics parse_statistics(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "boltzmann") return Statistics::Boltzmann;
  if (s == "bose") return Statistics::Bose;
  if (s == "fermi") return Statistics::Fermi;
  fail(ErrorCode::InvalidArgument, "unknown statistics '" + std::string(name) + "'");
}

double energy_unit(const BoxGeometry& geom, const Units& units) noexcept {
  const double k = geom.dual_spacing();
  return units.hbar * units.hbar * k * k / (2.0 * units.mass);
}

namespace {

std::int64_t max_energy_index(double e_max, double unit) {
  if (!(e_max >= 0.0) || !std::isfinite(e_max)) fail(ErrorCode::InvalidArgument, "spectrum: e_max must be finite and >= 0");
  const double s = std::floor(e_max / unit * (1.0 + 1e-12));
  if (s > 4.0e18) fail(ErrorCode::EnumerationGuard, "spectrum: cutoff far too large for enumeration");
  return static_cast<std::int64_t>(s);
}

// Modes with |n|^2 <= s_max sorted by (|n|^2, lexicographic).
std::vector<DualVector> modes_below(int dim, std::int64_t s_max) {
  const auto r = static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(s_max)))) + 1;
  std::vector<DualVector> out;
  for (const DualVector& v : box_window(dim, r))
    if (v.norm_squared() <= s_max) out.push_back(v);
  std::stable_sort(out.begin(), out.end(),
                   [](const DualVector& a, const DualVector& b) { return a.norm_squared() < b.norm_squared(); });
  return out;
}

struct Enumerator {
  const std::vector<DualVector>& modes;
  Statistics stats;
  std::int64_t total;
  std::vector<double> log_factorial;
  double guard;
  double produced = 0.0;
  const std::function<void(const OccupationState&)>& visit;
  OccupationState cur;

  void emit() {
    cur.multiplicity = 1.0;
    if (stats == Statistics::Boltzmann) {
      double lg = log_factorial[static_cast<std::size_t>(total)];
      for (const auto& [mode, c] : cur.occupancy) lg -= log_factorial[static_cast<std::size_t>(c)];
      cur.multiplicity = std::round(std::exp(lg));
    }
    produced += cur.multiplicity;
    if (produced > guard)
      fail(ErrorCode::EnumerationGuard, "spectrum: more than " + format_double(guard) + " states below the cutoff");
    visit(cur);
  }

  void run(std::size_t start, std::int64_t remaining, std::int64_t budget) {
    if (remaining == 0) {
      emit();
      return;
    }
    const std::int64_t max_count = stats == Statistics::Fermi ? 1 : remaining;
    for (std::size_t i = start; i < modes.size(); ++i) {
      const std::int64_t e = modes[i].norm_squared();
      // later modes are at least as expensive
      if (remaining * e > budget) break;
      for (std::int64_t c = max_count; c >= 1; --c) {
        if (c * e > budget) continue;
        cur.occupancy.emplace_back(modes[i], static_cast<int>(c));
        cur.energy_index += c * e;
        cur.momentum = cur.momentum + c * modes[i];
        run(i + 1, remaining - c, budget - c * e);
        cur.momentum = cur.momentum - c * modes[i];
        cur.energy_index -= c * e;
        cur.occupancy.pop_back();
      }
    }
  }
};

}  // namespace

void for_each_state(const BoxGeometry& geom, Statistics stats, double e_max, const Units& units,
                    const std::function<void(const OccupationState&)>& visit, const EnumerationOptions& opts) {
  const std::int64_t s_max = max_energy_index(e_max, energy_unit(geom, units));
  const std::int64_t N = geom.particles();
  if (N > 64) fail(ErrorCode::EnumerationGuard, "spectrum: enumeration limited to N <= 64");
  const auto modes = modes_below(geom.dim(), s_max);
  Enumerator en{modes, stats, N, {}, opts.guard, 0.0, visit, {}};
  en.log_factorial.resize(static_cast<std::size_t>(N) + 1, 0.0);
  for (std::int64_t i = 1; i <= N; ++i) en.log_factorial[static_cast<std::size_t>(i)] = std::lgamma(static_cast<double>(i) + 1.0);
  en.cur.momentum = DualVector::zero(geom.dim());
  en.run(0, N, s_max);
}

SpectralTable::SpectralTable(BoxGeometry geom, Statistics stats, Units units, double e_max)
    : geom_(geom), stats_(stats), units_(units), e_max_(e_max) {}

const SpectralTable::Levels* SpectralTable::find(const DualVector& Q) const noexcept {
  auto it = entries_.find(Q);
  return it == entries_.end() ? nullptr : &it->second;
}

std::size_t SpectralTable::level_count() const noexcept {
  std::size_t n = 0;
  for (const auto& [Q, levels] : entries_) n += levels.size();
  return n;
}

double SpectralTable::min_energy() const {
  if (entries_.empty()) fail(ErrorCode::InvalidArgument, "spectral table is empty");
  double e = std::numeric_limits<double>::infinity();
  for (const auto& [Q, levels] : entries_)
    if (!levels.empty()) e = std::min(e, levels.front());
  return e;
}

SpectralTable enumerate_spectrum(const BoxGeometry& geom, Statistics stats, double e_max, const Units& units,
                                 const EnumerationOptions& opts) {
  struct Row {
    DualVector Q;
    std::int64_t s;
    std::vector<std::pair<DualVector, int>> occupancy;
    std::int64_t copies;
  };
  std::vector<Row> rows;
  for_each_state(geom, stats, e_max, units, [&](const OccupationState& st) {
    rows.push_back({st.momentum, st.energy_index, st.occupancy, static_cast<std::int64_t>(st.multiplicity)});
  }, opts);
  if (rows.empty())
    fail(ErrorCode::CutoffTooSmall, "spectrum: no " + std::string(statistics_name(stats)) + " state has energy <= " +
                                        format_double(e_max));
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(a.Q, a.s, a.occupancy) < std::tie(b.Q, b.s, b.occupancy);
  });
  const double unit = energy_unit(geom, units);
  SpectralTable table(geom, stats, units, e_max);
  auto& entries = table.mutable_entries();
  for (const Row& r : rows) {
    auto& levels = entries[r.Q];
    levels.insert(levels.end(), static_cast<std::size_t>(r.copies), unit * static_cast<double>(r.s));
  }
  return table;
}

SpectralTable enumerate_spectrum(const BoxGeometry& geom, Statistics stats, double e_max, const ThermalParams& reference,
                                 const EnumerationOptions& opts) {
  SpectralTable t = enumerate_spectrum(geom, stats, e_max, reference.units(), opts);
  t.set_tail_bound(reference.beta(), std::exp(log_truncation_tail(geom, reference, e_max)));
  return t;
}

double log_truncation_tail(const BoxGeometry& geom, const ThermalParams& th, double e_max) {
  // For beta' < beta: sum_{E > e_max} e^{-beta E} <= e^{-(beta - beta') e_max} Z(beta'),
  // and Z(beta') <= z1(beta')^N for every statistics, with the one-dimensional
  // theta sum bounded by 1 + sqrt(pi / (beta' eps1)).
  const double eps1 = energy_unit(geom, th.units());
  const double beta = th.beta();
  const double nd = static_cast<double>(geom.particles()) * geom.dim();
  auto log_bound = [&](double s) {
    const double bp = s * beta;
    return -(beta - bp) * e_max + nd * std::log1p(std::sqrt(kPi / (bp * eps1)));
  };
  double best = std::numeric_limits<double>::infinity();
  for (int j = 1; j < 400; ++j) best = std::min(best, log_bound(j / 400.0));
  for (int j = 1; j <= 120; ++j) best = std::min(best, log_bound(0.0025 * std::pow(10.0, -0.1 * j)));
  return best;
}

PartitionFunctions partition_functions(const SpectralTable& table, const ThermalParams& th) {
  const BoxGeometry& geom = table.geometry();
  const double e0 = table.min_energy();
  std::vector<const std::pair<const DualVector, SpectralTable::Levels>*> rows;
  for (const auto& kv : table.entries()) rows.push_back(&kv);
  const auto w = parallel_map<double>(rows.size(), [&](std::size_t i) {
    CompensatedSum s;
    for (double e : rows[i]->second) s.add(std::exp(-th.beta() * (e - e0)));
    return s.value();
  });
  CompensatedSum z, zi;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    z.add(w[i]);
    if (is_irreducible(rows[i]->first, geom)) zi.add(w[i]);
  }
  PartitionFunctions out;
  out.Z_shifted = z.value();
  out.Z_irred_shifted = zi.value();
  const double log_tail = log_truncation_tail(geom, th, table.e_max());
  out.tail_shifted = std::exp(log_tail + th.beta() * e0);
  const double scale = std::exp(-th.beta() * e0);
  out.Z = out.Z_shifted * scale;
  out.Z_irred = out.Z_irred_shifted * scale;
  out.tail = std::exp(log_tail);
  return out;
}

MomentumDistribution nu_distribution(const SpectralTable& table, const ThermalParams& th) {
  const double e0 = table.min_energy();
  MomentumDistribution d;
  d.dim = table.geometry().dim();
  d.side = table.geometry().side();
  for (const auto& [Q, levels] : table.entries()) {
    CompensatedSum s;
    for (double e : levels) s.add(std::exp(-th.beta() * (e - e0)));
    d.support.push_back(Q);
    d.weights.push_back(s.value());
  }
  const double tail = std::exp(log_truncation_tail(table.geometry(), th, table.e_max()) + th.beta() * e0);
  const double norm = compensated_total(d.weights) + tail;
  for (double& w : d.weights) w /= norm;
  d.deficit = tail / norm;
  return d;
}

namespace {

// Dense array on the cube [-R, R]^d of the dual lattice.
struct Grid {
  int dim;
  std::int64_t radius;
  std::int64_t width;
  std::vector<double> v;

  Grid(int d, std::int64_t r) : dim(d), radius(r), width(2 * r + 1) {
    std::int64_t n = 1;
    for (int i = 0; i < d; ++i) n *= width;
    v.assign(static_cast<std::size_t>(n), 0.0);
  }
  std::int64_t index(const DualVector& q) const {
    std::int64_t idx = 0;
    for (int i = 0; i < dim; ++i) idx = idx * width + (q[i] + radius);
    return idx;
  }
  DualVector point(std::int64_t idx) const {
    DualVector q = DualVector::zero(dim);
    for (int i = dim - 1; i >= 0; --i) {
      q[i] = idx % width - radius;
      idx /= width;
    }
    return q;
  }
  double& at(const DualVector& q) { return v[static_cast<std::size_t>(index(q))]; }
};

struct SparseTerm {
  DualVector offset;
  double weight;
};

// out += scale * (terms * in), assuming all sums stay inside the grid.
void convolve_into(Grid& out, const std::vector<SparseTerm>& terms, const Grid& in, double scale) {
  for (std::size_t idx = 0; idx < in.v.size(); ++idx) {
    const double x = in.v[idx];
    if (x == 0.0) continue;
    const DualVector p = in.point(static_cast<std::int64_t>(idx));
    for (const SparseTerm& t : terms) out.at(p + t.offset) += scale * t.weight * x;
  }
}

// Smallest K with sum_{|n| > K} e^{-c n^2} <= tol * sum_n e^{-c n^2}; also the
// relative tail actually achieved.
std::pair<std::int64_t, double> one_dim_cutoff(double c, double tol) {
  const double full_lower = 1.0;  // n = 0 term alone
  for (std::int64_t K = 0;; ++K) {
    const double n1 = static_cast<double>(K + 1);
    const double tail = 2.0 * std::exp(-c * n1 * n1) / (-std::expm1(-c * (2.0 * n1 + 1.0)));
    if (tail <= tol * full_lower) return {K, tail};
    if (K > 10'000'000) fail(ErrorCode::NoConvergence, "one-particle law: cutoff search diverged");
  }
}

std::vector<SparseTerm> single_particle_terms(int dim, std::int64_t K, double c, std::int64_t stretch) {
  std::vector<SparseTerm> out;
  for (const DualVector& k : box_window(dim, K)) {
    const double w = std::exp(-c * static_cast<double>(stretch) * static_cast<double>(k.norm_squared()));
    if (w > 0.0) out.push_back({stretch * k, w});
  }
  return out;
}

void guard_grid(int dim, std::int64_t radius, double ops) {
  double cells = 1.0;
  for (int i = 0; i < dim; ++i) cells *= 2.0 * static_cast<double>(radius) + 1.0;
  if (cells > 5e7 || ops > 5e10)
    fail(ErrorCode::EnumerationGuard, "momentum law: grid of " + format_double(cells) + " cells is too large");
}

MomentumDistribution grid_to_distribution(const Grid& g, double side, double deficit) {
  MomentumDistribution d;
  d.dim = g.dim;
  d.side = side;
  const double total = compensated_total(g.v);
  double vmax = 0.0;
  for (double x : g.v) vmax = std::max(vmax, std::abs(x));
  for (std::size_t i = 0; i < g.v.size(); ++i) {
    double x = g.v[i];
    if (x < 0.0) {
      if (x < -1e-10 * vmax) fail(ErrorCode::NoConvergence, "momentum law: recursion lost precision");
      x = 0.0;
    }
    if (x == 0.0) continue;
    d.support.push_back(g.point(static_cast<std::int64_t>(i)));
    d.weights.push_back(x / total);
  }
  d.deficit = deficit;
  return d;
}

double product_deficit(double rel_tail_1d, double copies) { return -std::expm1(copies * std::log1p(-rel_tail_1d)); }

}  // namespace

MomentumDistribution boltzmann_convolution_oracle(const BoxGeometry& geom, const ThermalParams& th, double tol) {
  const double c = th.beta() * energy_unit(geom, th.units());
  const auto [K, tail] = one_dim_cutoff(c, tol);
  const std::int64_t N = geom.particles();
  const int d = geom.dim();
  const auto law = single_particle_terms(d, K, c, 1);
  guard_grid(d, N * K, static_cast<double>(N) * std::pow(2.0 * K * N + 1.0, d) * static_cast<double>(law.size()));
  Grid cur(d, N * K);
  cur.at(DualVector::zero(d)) = 1.0;
  for (std::int64_t n = 0; n < N; ++n) {
    Grid next(d, N * K);
    convolve_into(next, law, cur, 1.0);
    cur = std::move(next);
  }
  return grid_to_distribution(cur, geom.side(), product_deficit(tail, static_cast<double>(N * d)));
}

MomentumDistribution canonical_distribution(const BoxGeometry& geom, Statistics stats, const ThermalParams& th,
                                            double tol) {
  if (stats == Statistics::Boltzmann) return boltzmann_convolution_oracle(geom, th, tol);
  const double c = th.beta() * energy_unit(geom, th.units());
  const auto [K, tail] = one_dim_cutoff(c, tol);
  const std::int64_t N = geom.particles();
  const int d = geom.dim();
  const std::int64_t R = N * K;
  const double terms = std::pow(2.0 * K + 1.0, d);
  guard_grid(d, R, 0.5 * static_cast<double>(N * N) * terms * std::pow(2.0 * R + 1.0, d) * static_cast<double>(N + 1));
  std::vector<std::vector<SparseTerm>> cycles(static_cast<std::size_t>(N) + 1);
  for (std::int64_t j = 1; j <= N; ++j) cycles[static_cast<std::size_t>(j)] = single_particle_terms(d, K, c, j);
  std::vector<Grid> W;
  W.reserve(static_cast<std::size_t>(N) + 1);
  W.emplace_back(d, R);
  W[0].at(DualVector::zero(d)) = 1.0;
  for (std::int64_t n = 1; n <= N; ++n) {
    Grid next(d, R);
    for (std::int64_t j = 1; j <= n; ++j) {
      const double sign = (stats == Statistics::Fermi && j % 2 == 0) ? -1.0 : 1.0;
      convolve_into(next, cycles[static_cast<std::size_t>(j)], W[static_cast<std::size_t>(n - j)],
                    sign / static_cast<double>(n));
    }
    W.push_back(std::move(next));
  }
  return grid_to_distribution(W.back(), geom.side(), product_deficit(tail, static_cast<double>(N * d)));
}

double gamma_cdf(const MomentumDistribution& dist, double kappa) {
  if (!(kappa >= 0.0)) fail(ErrorCode::InvalidArgument, "gamma_cdf: kappa must be >= 0");
  return lattice_cdf(dist, kappa);
}

LatticeDistribution occupation_expectation(const BoxGeometry& geom, Statistics stats, const ThermalParams& th,
                                           double e_max, const EnumerationOptions& opts) {
  struct Row {
    std::int64_t s;
    double mult;
    std::vector<std::pair<DualVector, int>> occupancy;
  };
  std::vector<Row> rows;
  for_each_state(geom, stats, e_max, th.units(),
                 [&](const OccupationState& st) { rows.push_back({st.energy_index, st.multiplicity, st.occupancy}); }, opts);
  if (rows.empty()) fail(ErrorCode::CutoffTooSmall, "occupation: no state below the cutoff");
  const double unit = energy_unit(geom, th.units());
  std::int64_t s0 = rows.front().s;
  for (const Row& r : rows) s0 = std::min(s0, r.s);
  std::map<DualVector, CompensatedSum> acc;
  CompensatedSum z;
  for (const Row& r : rows) {
    const double w = r.mult * std::exp(-th.beta() * unit * static_cast<double>(r.s - s0));
    z.add(w);
    for (const auto& [mode, count] : r.occupancy) acc[mode].add(w * count);
  }
  const double tail = std::exp(log_truncation_tail(geom, th, e_max) + th.beta() * unit * static_cast<double>(s0));
  const double norm = z.value() + tail;
  LatticeDistribution out;
  out.dim = geom.dim();
  out.side = geom.side();
  for (const auto& [mode, s] : acc) {
    out.support.push_back(mode);
    out.weights.push_back(s.value() / (static_cast<double>(geom.particles()) * norm));
  }
  out.deficit = tail / norm;
  return out;
}

OmegaResult omega_and_argmax(const SpectralTable& table, const ThermalParams& th) {
  const auto* zero = table.find(DualVector::zero(table.geometry().dim()));
  if (zero == nullptr || zero->empty()) fail(ErrorCode::MissingZero, "omega: table has no Q = 0 entry");
  const double e00 = zero->front();
  OmegaResult out;
  bool have = false;
  double best = 0.0;
  for (const auto& [q, levels] : table.entries()) {
    if (levels.empty() || !is_irreducible(q, table.geometry())) continue;
    CompensatedSum s;
    for (double e : levels) s.add(std::exp(-th.beta() * (e - levels.front())));
    const double x = -th.beta() * (levels.front() - e00) + std::log(s.value());
    out.omega[q] = s.value();
    out.x[q] = x;
    // map order is lexicographic, so a strict comparison keeps the smallest q on ties
    if (!have || x > best) {
      best = x;
      out.q_max = q;
      have = true;
    }
  }
  return out;
}

std::map<DualVector, double> epsilon_dispersion(const SpectralTable& table) {
  const auto* zero = table.find(DualVector::zero(table.geometry().dim()));
  if (zero == nullptr || zero->empty()) fail(ErrorCode::MissingZero, "epsilon: table has no Q = 0 entry");
  std::map<DualVector, double> out;
  for (const auto& [Q, levels] : table.entries())
    if (!levels.empty()) out[Q] = levels.front() - zero->front();
  return out;
}

GalileanReport galilean_check(const SpectralTable& table, std::int64_t k_radius) {
  std::vector<DualVector> boosts;
  for (const DualVector& k : box_window(table.geometry().dim(), k_radius))
    if (!k.is_zero()) boosts.push_back(k);
  return galilean_check(table, boosts);
}

GalileanReport galilean_check(const SpectralTable& table, const std::vector<DualVector>& boosts) {
  const BoxGeometry& geom = table.geometry();
  const std::int64_t N = geom.particles();
  const double unit = energy_unit(geom, table.units());
  GalileanReport rep;
  for (const auto& [Q, levels] : table.entries()) {
    for (const DualVector& k : boosts) {
      if (k.dim != geom.dim()) fail(ErrorCode::InvalidArgument, "galilean_check: boost dimension mismatch");
      const auto* boosted = table.find(Q + N * k);
      if (boosted == nullptr) continue;
      const double shift = unit * static_cast<double>(N * k.norm_squared() + 2 * k.dot(Q));
      const std::size_t n = std::min(levels.size(), boosted->size());
      if (n == 0) continue;
      ++rep.pairs_compared;
      rep.levels_compared += n;
      for (std::size_t i = 0; i < n; ++i)
        rep.max_residual = std::max(rep.max_residual, std::abs((*boosted)[i] - levels[i] - shift));
    }
  }
  rep.empty = rep.pairs_compared == 0;
  return rep;
}

SpectralTable boost_table(const SpectralTable& table, const DualVector& k) {
  const BoxGeometry& geom = table.geometry();
  if (k.dim != geom.dim()) fail(ErrorCode::InvalidArgument, "boost_table: boost dimension mismatch");
  SpectralTable out(geom, table.statistics(), table.units(), table.e_max());
  for (const auto& [Q, levels] : table.entries()) out.mutable_entries()[Q + geom.particles() * k] = levels;
  if (table.reference_beta()) out.set_tail_bound(*table.reference_beta(), table.tail_bound());
  return out;
}

}  // namespace totmom
