#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "paravar/block_values.hpp"
#include "paravar/family.hpp"
#include "paravar/spectral.hpp"

namespace paravar {

struct BlockSumOptions {
  /// Compare bilinear blocks against direct double sums at a few samples when
  /// the window has at most kSelfCheckMaxScales scales.
  bool self_check = true;
  /// Fault injection for the identity suite's self-test: flips the sign of
  /// the increment in the bilinear prefix recurrence.
  bool inject_prefix_sign_error = false;
};

/// Per-sample prefix structures giving O(M^2) evaluation (independent of the
/// number of scales) of iterated block sums
///   S_{p..q}(a, b] = sum_{a < i_p < ... < i_q <= b} prod_m f^(m)_{i_m}(x)
/// for every contiguous factor range p..q. Breakpoints a, b are local:
/// 0 <= a <= b <= scale_count, and (a, b] covers global scales
/// i_min + a .. i_min + b - 1.
class BlockSumTable {
 public:
  static constexpr int kSelfCheckMaxScales = 8;
  static constexpr int kDefaultMaxDegree = 3;

  /// Factors f, g, f, g, ... up to max_degree.
  static BlockSumTable build(const ScaleFamily& f, const ScaleFamily& g,
                             int max_degree = kDefaultMaxDegree, BlockSumOptions options = {});
  static BlockSumTable build(const std::vector<ScaleFamily>& factors, BlockSumOptions options = {});

  const GridSpec& grid() const { return grid_; }
  int i_min() const { return i_min_; }
  int scale_count() const { return scale_count_; }
  int max_degree() const { return max_degree_; }
  std::size_t samples() const { return grid_.size(); }

  /// F(a, b] for factor 0.
  double linear(std::size_t x, int a, int b) const { return range_block(x, 0, 0, a, b); }
  /// sum over factor `factor` alone.
  double linear_factor(std::size_t x, int factor, int a, int b) const {
    return range_block(x, factor, factor, a, b);
  }
  /// S(a, b] = sum_{a<i<j<=b} f_i g_j.
  double bilinear(std::size_t x, int a, int b) const { return range_block(x, 0, 1, a, b); }
  /// Iterated sum over factors 0..degree-1.
  double multilinear(std::size_t x, int a, int b, int degree) const;
  /// Iterated sum over the contiguous factors first..last (0-based, inclusive).
  double range_block(std::size_t x, int first, int last, int a, int b) const;

  BlockValues linear_values(std::size_t x, int factor = 0) const;
  BlockValues bilinear_values(std::size_t x) const;
  BlockValues multilinear_values(std::size_t x, int degree) const;
  /// Unconstrained product F(a, b] G(a, b] (factors 0 and 1).
  BlockValues product_values(std::size_t x) const;

 private:
  BlockSumTable(GridSpec grid, int i_min, int scale_count, int max_degree);

  std::size_t range_id(int first, int last) const;
  long double prefix(std::size_t range, std::size_t x, int b) const {
    return prefix_[(range * samples() + x) * static_cast<std::size_t>(scale_count_ + 1) +
                   static_cast<std::size_t>(b)];
  }
  long double& prefix(std::size_t range, std::size_t x, int b) {
    return prefix_[(range * samples() + x) * static_cast<std::size_t>(scale_count_ + 1) +
                   static_cast<std::size_t>(b)];
  }
  void check_window(int a, int b) const;
  void self_check(const std::vector<ScaleFamily>& factors) const;

  GridSpec grid_;
  int i_min_;
  int scale_count_;
  int max_degree_;
  std::vector<long double> prefix_;
};

/// Direct O(n_scales^2) double sum, used as an oracle.
double direct_bilinear(const std::vector<double>& f, const std::vector<double>& g, int a, int b);

/// Values of each family component at sample x, in scale order.
std::vector<double> sample_values(const ScaleFamily& family, std::size_t x);

struct DiscreteSource {};
struct ContinuousSource {
  BandProfile profile;
  int i_min;
  int i_max;
};
/// How a paraproduct turns signals into scale families.
using FamilySource = std::variant<DiscreteSource, ContinuousSource>;

ScaleFamily family_from_source(const DyadicSignal& f, const FamilySource& source);

/// P(f, g)(x) = sum_{i<j} f_i(x) g_j(x) over the source's full scale window.
DyadicSignal paraproduct(const DyadicSignal& f, const DyadicSignal& g, const FamilySource& source);

/// sup over windows (N0, N1] of |sum_{N0<i<j<=N1} f_i g_j| per sample.
DyadicSignal maximal_paraproduct(const DyadicSignal& f, const DyadicSignal& g,
                                 const FamilySource& source);

}  // namespace paravar
