#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "paravar/family.hpp"
#include "paravar/grid.hpp"

namespace paravar::test {

inline DyadicSignal signal(std::vector<double> values) {
  int level = 0;
  while ((std::size_t{1} << level) < values.size()) ++level;
  return DyadicSignal(GridSpec(level), std::move(values));
}

inline DyadicSignal random_signal(std::mt19937_64& rng, int level) {
  std::normal_distribution<double> normal;
  std::vector<double> v(std::size_t{1} << level);
  for (double& x : v) x = normal(rng);
  return DyadicSignal(GridSpec(level), std::move(v));
}

inline double max_abs_diff(const DyadicSignal& a, const DyadicSignal& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

// Single-sample scale family on the one-point grid of level L with constant
// components: handy for hand-written scale sequences.
inline ScaleFamily constant_family(int level, int i_min, const std::vector<double>& values,
                                   Flavor flavor = Flavor::Raw) {
  const GridSpec grid(level);
  std::vector<DyadicSignal> components;
  for (double v : values) components.push_back(DyadicSignal::constant(grid, v));
  return ScaleFamily(grid, i_min, flavor, std::move(components));
}

}  // namespace paravar::test
