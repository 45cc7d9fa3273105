#pragma once

#include <vector>

#include "paravar/family.hpp"
#include "paravar/grid.hpp"

namespace paravar {

/// Orthogonal Haar expansion f = mean + sum_I c_I h_I with L^inf-normalized
/// Haar functions (h_I = +1 on the left half of I, -1 on the right half), so
/// c_I = (avg_left - avg_right) / 2.
struct HaarCoefficients {
  GridSpec grid;
  double mean = 0.0;
  /// detail[l][a] is c_I for I = [a 2^-l, (a+1) 2^-l), l = 0..L-1.
  std::vector<std::vector<double>> detail;

  double coefficient(const DyadicInterval& interval) const {
    return detail[static_cast<std::size_t>(interval.scale)][interval.position];
  }
};

HaarCoefficients haar_analyze(const DyadicSignal& f);
DyadicSignal haar_synthesize(const HaarCoefficients& coefficients);

/// Delta_m: projection onto Haar functions of intervals of length 2^(1-m), 1 <= m <= L.
DyadicSignal delta(const DyadicSignal& f, int m);

/// E_i: averages over dyadic intervals of length 2^-i, 0 <= i <= L.
DyadicSignal expectation(const DyadicSignal& f, int i);

/// Discrete Littlewood-Paley family f_i = Delta_i f for i_min <= i <= i_max.
ScaleFamily make_discrete_family(const DyadicSignal& f, int i_min, int i_max);

/// Builds a discrete family directly from Haar coefficients; coefficient(l, a)
/// is queried for every interval at scale l = i-1 with i in range.
template <typename CoefficientFn>
ScaleFamily discrete_family_from_coefficients(GridSpec grid, int i_min, int i_max,
                                              CoefficientFn&& coefficient) {
  std::vector<DyadicSignal> components;
  for (int i = i_min; i <= i_max; ++i) {
    const int scale = i - 1;
    const std::size_t width = std::size_t{1} << (grid.level() - scale);
    std::vector<double> values(grid.size());
    for (std::size_t a = 0; a < (std::size_t{1} << scale); ++a) {
      const double c = coefficient(scale, a);
      for (std::size_t j = 0; j < width; ++j) values[a * width + j] = j < width / 2 ? c : -c;
    }
    components.emplace_back(grid, std::move(values));
  }
  return ScaleFamily(grid, i_min, Flavor::Discrete, std::move(components));
}

/// Largest relative deviation between a family component and its Haar
/// projection at the component's own scale.
double discrete_projection_error(const ScaleFamily& family);

/// Sum of the family components (the signal a discrete family was cut from,
/// minus its mean and out-of-range scales).
DyadicSignal family_sum(const ScaleFamily& family);

inline constexpr double kDiscreteValidationTolerance = 1e-9;

/// Throws std::invalid_argument if a discrete family fails the round-trip check.
void validate_discrete(const ScaleFamily& family);

}  // namespace paravar
