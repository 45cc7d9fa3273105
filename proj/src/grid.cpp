#include "paravar/grid.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>

namespace paravar {

GridSpec::GridSpec(int level) : level_(level) {
  if (level < 1 || level > kMaxLevel) {
    throw std::invalid_argument("grid level must be in [1, " + std::to_string(kMaxLevel) +
                                "], got " + std::to_string(level));
  }
}

DyadicSignal::DyadicSignal(GridSpec grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("signal has " + std::to_string(values_.size()) +
                                " samples, grid expects " + std::to_string(grid_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("signal sample is not finite");
  }
}

DyadicSignal DyadicSignal::zeros(GridSpec grid) {
  return DyadicSignal(grid, std::vector<double>(grid.size(), 0.0));
}

DyadicSignal DyadicSignal::constant(GridSpec grid, double value) {
  return DyadicSignal(grid, std::vector<double>(grid.size(), value));
}

namespace {

void require_same_grid(const DyadicSignal& a, const DyadicSignal& b) {
  if (a.grid() != b.grid()) throw std::invalid_argument("signals live on different grids");
}

template <typename Op>
DyadicSignal zip(const DyadicSignal& a, const DyadicSignal& b, Op op) {
  require_same_grid(a, b);
  std::vector<double> out(a.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = op(a[j], b[j]);
  return DyadicSignal(a.grid(), std::move(out));
}

}  // namespace

DyadicSignal operator+(const DyadicSignal& a, const DyadicSignal& b) {
  return zip(a, b, std::plus<>{});
}
DyadicSignal operator-(const DyadicSignal& a, const DyadicSignal& b) {
  return zip(a, b, std::minus<>{});
}
DyadicSignal operator*(const DyadicSignal& a, const DyadicSignal& b) {
  return zip(a, b, std::multiplies<>{});
}
DyadicSignal operator*(double alpha, const DyadicSignal& a) {
  std::vector<double> out(a.values().begin(), a.values().end());
  for (double& v : out) v *= alpha;
  return DyadicSignal(a.grid(), std::move(out));
}

double DyadicInterval::length() const { return std::ldexp(1.0, -scale); }

std::size_t DyadicInterval::first_sample(const GridSpec& grid) const {
  return position << (grid.level() - scale);
}

std::size_t DyadicInterval::sample_count(const GridSpec& grid) const {
  return std::size_t{1} << (grid.level() - scale);
}

bool DyadicInterval::contains_sample(const GridSpec& grid, std::size_t j) const {
  return (j >> (grid.level() - scale)) == position;
}

bool DyadicInterval::contains(const DyadicInterval& other) const {
  return other.scale >= scale && (other.position >> (other.scale - scale)) == position;
}

DyadicInterval DyadicInterval::parent() const {
  if (scale == 0) throw std::domain_error("the unit interval has no parent");
  return {scale - 1, position / 2};
}

DyadicInterval DyadicInterval::containing(const GridSpec& grid, int scale, std::size_t j) {
  if (scale < 0 || scale > grid.level()) throw std::out_of_range("interval scale out of range");
  return {scale, j >> (grid.level() - scale)};
}

bool tripled_covers_circle(const DyadicInterval& interval) { return interval.scale <= 1; }

std::vector<bool> tripled_mask(const GridSpec& grid, const DyadicInterval& interval) {
  std::vector<bool> mask(grid.size(), false);
  if (tripled_covers_circle(interval)) {
    mask.assign(grid.size(), true);
    return mask;
  }
  const std::size_t count = std::size_t{1} << interval.scale;
  for (std::size_t offset : {count - 1, std::size_t{0}, std::size_t{1}}) {
    DyadicInterval piece{interval.scale, (interval.position + offset) % count};
    const std::size_t first = piece.first_sample(grid);
    for (std::size_t j = 0; j < piece.sample_count(grid); ++j) mask[first + j] = true;
  }
  return mask;
}

double ExponentSet::u() const {
  if (std::isinf(p)) return q;
  if (std::isinf(q)) return p;
  return p * q / (p + q);
}

double ExponentSet::endpoint_t() const { return r * s / (r + s); }

const char* to_string(WindowPolicy policy) {
  return policy == WindowPolicy::Dyadic ? "dyadic" : "all";
}

WindowPolicy window_policy_from_string(std::string_view name) {
  if (name == "dyadic") return WindowPolicy::Dyadic;
  if (name == "all") return WindowPolicy::AllAligned;
  throw std::invalid_argument("unknown window policy '" + std::string(name) + "'");
}

double pairwise_sum(std::span<const double> values) {
  if (values.empty()) return 0.0;
  if (values.size() == 1) return values[0];
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double mean(const DyadicSignal& f) {
  return pairwise_sum(f.values()) / static_cast<double>(f.size());
}

double lp_norm(const DyadicSignal& f, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("lp_norm exponent must be positive");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
  }
  std::vector<double> powered(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) {
    powered[j] = p == 1.0 ? std::abs(f[j]) : std::pow(std::abs(f[j]), p);
  }
  const double avg = pairwise_sum(powered) / static_cast<double>(f.size());
  if (p == 1.0) return avg;
  if (p == 2.0) return std::sqrt(avg);
  return std::pow(avg, 1.0 / p);
}

namespace {

std::vector<double> dyadic_maximal(const GridSpec& grid, std::span<const double> absval) {
  const std::size_t n = grid.size();
  std::vector<double> out(absval.begin(), absval.end());
  // Block sums by repeated pairing, coarsening one scale per pass.
  std::vector<double> sums(absval.begin(), absval.end());
  for (int scale = grid.level() - 1; scale >= 0; --scale) {
    const std::size_t blocks = std::size_t{1} << scale;
    const std::size_t width = n / blocks;
    for (std::size_t b = 0; b < blocks; ++b) sums[b] = sums[2 * b] + sums[2 * b + 1];
    for (std::size_t b = 0; b < blocks; ++b) {
      const double avg = sums[b] / static_cast<double>(width);
      for (std::size_t j = b * width; j < (b + 1) * width; ++j) out[j] = std::max(out[j], avg);
    }
  }
  return out;
}

std::vector<double> aligned_maximal(const GridSpec& grid, std::span<const double> absval) {
  const std::size_t n = grid.size();
  std::vector<long double> prefix(2 * n + 1, 0.0L);
  for (std::size_t j = 0; j < 2 * n; ++j) prefix[j + 1] = prefix[j] + absval[j % n];
  std::vector<double> out = dyadic_maximal(grid, absval);
  for (std::size_t start = 0; start < n; ++start) {
    // Windows starting at `start` that contain start+len-1 are exactly those of
    // length >= len, so a running max from the longest window down suffices.
    double running = 0.0;
    for (std::size_t len = n; len >= 1; --len) {
      const double avg =
          static_cast<double>((prefix[start + len] - prefix[start]) / static_cast<long double>(len));
      running = std::max(running, avg);
      double& slot = out[(start + len - 1) % n];
      slot = std::max(slot, running);
    }
  }
  return out;
}

}  // namespace

DyadicSignal maximal_function(const DyadicSignal& f, WindowPolicy windows) {
  std::vector<double> absval(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) absval[j] = std::abs(f[j]);
  auto out = windows == WindowPolicy::Dyadic ? dyadic_maximal(f.grid(), absval)
                                             : aligned_maximal(f.grid(), absval);
  return DyadicSignal(f.grid(), std::move(out));
}

DyadicSignal maximal_function_r(const DyadicSignal& f, double r, WindowPolicy windows) {
  if (!(r >= 1.0)) throw std::invalid_argument("maximal_function_r requires r >= 1");
  if (r == 1.0) return maximal_function(f, windows);
  std::vector<double> powered(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) powered[j] = std::pow(std::abs(f[j]), r);
  auto m = maximal_function(DyadicSignal(f.grid(), std::move(powered)), windows);
  std::vector<double> out(m.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = std::pow(m[j], 1.0 / r);
  return DyadicSignal(f.grid(), std::move(out));
}

namespace {

double median_deviation(std::vector<double> block) {
  const std::size_t k = block.size();
  const std::size_t lower = (k - 1) / 2;
  std::nth_element(block.begin(), block.begin() + static_cast<std::ptrdiff_t>(lower), block.end());
  const double med = block[lower];
  double acc = 0.0;
  for (double v : block) acc += std::abs(v - med);
  return acc / static_cast<double>(k);
}

std::vector<double> dyadic_sharp(const DyadicSignal& h) {
  const GridSpec& grid = h.grid();
  std::vector<double> out(h.size(), 0.0);
  for (int scale = 0; scale <= grid.level(); ++scale) {
    const std::size_t width = std::size_t{1} << (grid.level() - scale);
    for (std::size_t first = 0; first < h.size(); first += width) {
      std::vector<double> block(h.values().begin() + static_cast<std::ptrdiff_t>(first),
                                h.values().begin() + static_cast<std::ptrdiff_t>(first + width));
      const double dev = median_deviation(std::move(block));
      for (std::size_t j = first; j < first + width; ++j) out[j] = std::max(out[j], dev);
    }
  }
  return out;
}

std::vector<double> aligned_sharp(const DyadicSignal& h) {
  const std::size_t n = h.size();
  std::vector<double> out = dyadic_sharp(h);
  std::vector<double> dev(n + 1, 0.0);
  for (std::size_t start = 0; start < n; ++start) {
    // Values are shifted by h[start]; deviation from the median is shift invariant
    // and constants then produce exact zeros.
    std::priority_queue<double> lower;
    std::priority_queue<double, std::vector<double>, std::greater<>> upper;
    long double lower_sum = 0.0L;
    long double upper_sum = 0.0L;
    for (std::size_t len = 1; len <= n; ++len) {
      const double v = h[(start + len - 1) % n] - h[start];
      if (lower.empty() || v <= lower.top()) {
        lower.push(v);
        lower_sum += v;
      } else {
        upper.push(v);
        upper_sum += v;
      }
      // Keep |lower| = ceil(len/2) so lower.top() is the lower median.
      if (lower.size() > upper.size() + 1) {
        upper.push(lower.top());
        upper_sum += lower.top();
        lower_sum -= lower.top();
        lower.pop();
      } else if (upper.size() > lower.size()) {
        lower.push(upper.top());
        lower_sum += upper.top();
        upper_sum -= upper.top();
        upper.pop();
      }
      const long double med = lower.top();
      const long double total = (upper_sum - med * static_cast<long double>(upper.size())) +
                                (med * static_cast<long double>(lower.size()) - lower_sum);
      dev[len] = static_cast<double>(std::max(total, 0.0L) / static_cast<long double>(len));
    }
    double running = 0.0;
    for (std::size_t len = n; len >= 1; --len) {
      running = std::max(running, dev[len]);
      double& slot = out[(start + len - 1) % n];
      slot = std::max(slot, running);
    }
  }
  return out;
}

}  // namespace

DyadicSignal sharp_function(const DyadicSignal& h, WindowPolicy windows) {
  auto out = windows == WindowPolicy::Dyadic ? dyadic_sharp(h) : aligned_sharp(h);
  return DyadicSignal(h.grid(), std::move(out));
}

double maximal_weak_constant(WindowPolicy windows) {
  return windows == WindowPolicy::Dyadic ? 1.0 : 2.0;
}

}  // namespace paravar
