#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <string>
#include <thread>
#include <vector>

namespace totmom {

// Neumaier variant of Kahan summation. Results depend only on the order of
// add() calls, never on thread scheduling.
class CompensatedSum {
public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

template <class Range>
double compensated_total(const Range& values) {
  CompensatedSum s;
  for (double v : values) s.add(v);
  return s.value();
}

// Worker count used by the pure grid evaluators. 1 means serial.
unsigned worker_threads() noexcept;
void set_worker_threads(unsigned n) noexcept;

// Evaluates fn(i) for i in [0, n) and stores results by index, so the output is
// identical for every thread count.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, Fn&& fn) {
  std::vector<T> out(n);
  const unsigned threads = std::min<std::size_t>(worker_threads(), std::max<std::size_t>(n, 1));
  if (threads <= 1 || n < 64) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t lo = t * chunk;
      const std::size_t hi = std::min(n, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back([&, lo, hi] {
        for (std::size_t i = lo; i < hi; ++i) out[i] = fn(i);
      });
    }
  }  // joined here
  return out;
}

// Shortest round-trip decimal text, locale independent.
inline std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace totmom
