#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace paravar {

/// Periodic dyadic grid on [0,1) with n = 2^level samples; sample j sits at j/n
/// and carries integration weight 1/n.
class GridSpec {
 public:
  explicit GridSpec(int level);

  int level() const { return level_; }
  std::size_t size() const { return std::size_t{1} << level_; }
  double weight() const { return 1.0 / static_cast<double>(size()); }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

  static constexpr int kMaxLevel = 24;

 private:
  int level_;
};

/// Real samples of a function on the periodic unit interval. Values are finite.
class DyadicSignal {
 public:
  DyadicSignal(GridSpec grid, std::vector<double> values);

  static DyadicSignal zeros(GridSpec grid);
  static DyadicSignal constant(GridSpec grid, double value);

  const GridSpec& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t j) const { return values_[j]; }

  friend bool operator==(const DyadicSignal&, const DyadicSignal&) = default;

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

DyadicSignal operator+(const DyadicSignal& a, const DyadicSignal& b);
DyadicSignal operator-(const DyadicSignal& a, const DyadicSignal& b);
DyadicSignal operator*(double alpha, const DyadicSignal& a);
/// Pointwise product.
DyadicSignal operator*(const DyadicSignal& a, const DyadicSignal& b);

/// I = [position * 2^-scale, (position + 1) * 2^-scale).
struct DyadicInterval {
  int scale = 0;
  std::size_t position = 0;

  double length() const;
  /// Half-open sample range [first, last) covered on `grid`.
  std::size_t first_sample(const GridSpec& grid) const;
  std::size_t sample_count(const GridSpec& grid) const;
  bool contains_sample(const GridSpec& grid, std::size_t j) const;
  bool contains(const DyadicInterval& other) const;
  DyadicInterval parent() const;
  DyadicInterval left_child() const { return {scale + 1, 2 * position}; }
  DyadicInterval right_child() const { return {scale + 1, 2 * position + 1}; }

  /// The interval at `scale` containing sample j.
  static DyadicInterval containing(const GridSpec& grid, int scale, std::size_t j);

  friend auto operator<=>(const DyadicInterval&, const DyadicInterval&) = default;
};

/// Sample mask of the periodic tripling 3I (I and its two neighbours, wrapping).
std::vector<bool> tripled_mask(const GridSpec& grid, const DyadicInterval& interval);
bool tripled_covers_circle(const DyadicInterval& interval);

/// Exponents used across the inequalities. u = pq/(p+q) is the bilinear outer
/// exponent.
struct ExponentSet {
  double p = 2.0;
  double q = 2.0;
  double r = 2.0;
  double s = 2.0;
  double t = 1.0;

  double u() const;
  /// rs/(r+s), the critical bilinear variation exponent.
  double endpoint_t() const;
};

enum class WindowPolicy {
  Dyadic,      ///< dyadic intervals only, O(n log n)
  AllAligned,  ///< every periodic window with sample endpoints, O(n^2)
};

const char* to_string(WindowPolicy policy);
WindowPolicy window_policy_from_string(std::string_view name);

/// Pairwise (cascade) summation. Sums of 2^k equal terms are exact.
double pairwise_sum(std::span<const double> values);

double mean(const DyadicSignal& f);

/// ((1/n) sum |f_j|^p)^(1/p); p = +inf gives max |f_j|.
double lp_norm(const DyadicSignal& f, double p);

/// Hardy-Littlewood maximal function of |f| over the window set.
DyadicSignal maximal_function(const DyadicSignal& f, WindowPolicy windows);

/// M_r f = (M |f|^r)^(1/r).
DyadicSignal maximal_function_r(const DyadicSignal& f, double r, WindowPolicy windows);

/// h#(x) = sup over windows I containing x of the mean absolute deviation of h
/// on I from its (lower) median.
DyadicSignal sharp_function(const DyadicSignal& h, WindowPolicy windows);

/// Weak-(1,1) constant of the maximal operator for the window policy:
/// 1 for dyadic windows, 2 for all sample-aligned periodic windows.
double maximal_weak_constant(WindowPolicy windows);

}  // namespace paravar
