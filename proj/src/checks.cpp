#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "paravar/blocksum.hpp"
#include "paravar/variation.hpp"
#include "paravar/verify.hpp"

namespace paravar {

BootstrapReport bootstrap_check(const ScaleFamily& f, const ScaleFamily& g, double t, double t0) {
  if (!(t0 > t) || !(t > 0.0)) throw std::invalid_argument("bootstrap needs 0 < t < t0");
  const BlockSumTable table = BlockSumTable::build(f, g, 2);
  BootstrapReport report;
  for (std::size_t x = 0; x < table.samples(); ++x) {
    const BlockValues values = table.bilinear_values(x);
    double smallest = INFINITY;
    double largest = 0.0;
    for (int a = 0; a < values.scale_count(); ++a) {
      for (int b = a + 1; b <= values.scale_count(); ++b) {
        const double v = std::abs(values.get(a, b));
        if (v > 0.0) smallest = std::min(smallest, v);
        largest = std::max(largest, v);
      }
    }
    ++report.samples;
    if (largest == 0.0) continue;
    const double lhs = std::pow(variation_value(values, t0), t0);
    double rhs = 0.0;
    for (int n = static_cast<int>(std::floor(std::log2(smallest))) - 1;
         n <= static_cast<int>(std::ceil(std::log2(largest))); ++n) {
      const double lambda = std::ldexp(1.0, n);
      rhs += std::pow(lambda, t0) * static_cast<double>(jump_count(values, lambda).count);
    }
    rhs *= std::pow(2.0, t0);
    report.max_ratio = std::max(report.max_ratio, lhs / rhs);
    if (lhs > rhs * (1.0 + 1e-12)) ++report.violations;
  }
  return report;
}

JswReport jsw_comparison(const DyadicSignal& f, const DyadicSignal& g, const BandProfile& lowpass,
                         double lambda) {
  if (!(f.grid() == g.grid())) throw std::invalid_argument("signals live on different grids");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  const GridSpec& grid = f.grid();
  const int level = grid.level();
  std::vector<DyadicSignal> d;
  std::vector<DyadicSignal> dg;
  for (int j = 1; j <= level; ++j) {
    dg.push_back(delta(g, j));
    d.push_back((expectation(f, j - 1) - convolve_scale(f, lowpass, j - 1)) * dg.back());
  }
  const DyadicSignal sf = jsw_square_function(f, lowpass);

  JswReport report;
  report.samples = grid.size();
  report.square_function_norm = lp_norm(sf, 2.0);
  double total = 0.0;
  std::vector<double> column(static_cast<std::size_t>(level));
  for (std::size_t x = 0; x < grid.size(); ++x) {
    double absolute = 0.0;
    double energy = 0.0;
    for (int j = 0; j < level; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      column[jj] = d[jj][x];
      absolute += std::abs(column[jj]);
      energy += dg[jj][x] * dg[jj][x];
    }
    total += absolute;
    const double jumps = lambda * static_cast<double>(jump_count(BlockValues::linear(column), lambda).count);
    const double square = sf[x] * std::sqrt(energy);
    const double tolerance = 1e-12 * (absolute + square) + 1e-300;
    if (jumps > absolute + tolerance || absolute > square + tolerance) ++report.violations;
    if (absolute > 0.0) report.max_jump_ratio = std::max(report.max_jump_ratio, jumps / absolute);
    if (square > 0.0) report.max_square_ratio = std::max(report.max_square_ratio, absolute / square);
  }
  report.difference_norm = total * grid.weight();
  return report;
}

}  // namespace paravar
