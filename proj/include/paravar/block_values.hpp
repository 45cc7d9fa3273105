#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace paravar {

/// Block values A(a, b] over a window of `scale_count` scales at one sample,
/// with local breakpoints 0 <= a <= b <= scale_count and A(a, a] = 0.
class BlockValues {
 public:
  explicit BlockValues(int scale_count)
      : scale_count_(scale_count),
        values_(static_cast<std::size_t>(scale_count + 1) * static_cast<std::size_t>(scale_count + 1),
                0.0) {
    if (scale_count < 0) throw std::invalid_argument("negative scale count");
  }

  template <typename Fn>
  static BlockValues from(int scale_count, Fn&& fn) {
    BlockValues out(scale_count);
    for (int a = 0; a < scale_count; ++a) {
      for (int b = a + 1; b <= scale_count; ++b) out.set(a, b, fn(a, b));
    }
    return out;
  }

  /// Linear block sums of a value sequence: A(a, b] = sum_{a <= c < b} v[c].
  static BlockValues linear(const std::vector<double>& v) {
    const int n = static_cast<int>(v.size());
    BlockValues out(n);
    for (int a = 0; a < n; ++a) {
      double acc = 0.0;
      for (int b = a + 1; b <= n; ++b) {
        acc += v[static_cast<std::size_t>(b - 1)];
        out.set(a, b, acc);
      }
    }
    return out;
  }

  int scale_count() const { return scale_count_; }

  double operator()(int a, int b) const {
    if (a < 0 || b > scale_count_ || a > b) throw std::out_of_range("block window out of range");
    return values_[index(a, b)];
  }

  void set(int a, int b, double value) {
    if (a < 0 || b > scale_count_ || a >= b) throw std::out_of_range("block window out of range");
    values_[index(a, b)] = value;
  }

  /// Unchecked access for inner loops.
  double get(int a, int b) const { return values_[index(a, b)]; }

 private:
  std::size_t index(int a, int b) const {
    return static_cast<std::size_t>(a) * static_cast<std::size_t>(scale_count_ + 1) +
           static_cast<std::size_t>(b);
  }

  int scale_count_;
  std::vector<double> values_;
};

}  // namespace paravar
