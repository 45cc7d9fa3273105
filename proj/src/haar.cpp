#include "paravar/haar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace paravar {

HaarCoefficients haar_analyze(const DyadicSignal& f) {
  const GridSpec grid = f.grid();
  HaarCoefficients out{grid, 0.0, {}};
  out.detail.resize(static_cast<std::size_t>(grid.level()));
  std::vector<double> averages(f.values().begin(), f.values().end());
  for (int scale = grid.level() - 1; scale >= 0; --scale) {
    const std::size_t count = std::size_t{1} << scale;
    auto& detail = out.detail[static_cast<std::size_t>(scale)];
    detail.resize(count);
    for (std::size_t a = 0; a < count; ++a) {
      const double left = averages[2 * a];
      const double right = averages[2 * a + 1];
      detail[a] = 0.5 * (left - right);
      averages[a] = 0.5 * (left + right);
    }
  }
  out.mean = averages[0];
  return out;
}

DyadicSignal haar_synthesize(const HaarCoefficients& coefficients) {
  const GridSpec grid = coefficients.grid;
  std::vector<double> values(grid.size(), 0.0);
  values[0] = coefficients.mean;
  for (int scale = 0; scale < grid.level(); ++scale) {
    const std::size_t count = std::size_t{1} << scale;
    const auto& detail = coefficients.detail[static_cast<std::size_t>(scale)];
    // Expand in place from the back so parents are read before being overwritten.
    for (std::size_t a = count; a-- > 0;) {
      const double avg = values[a];
      values[2 * a] = avg + detail[a];
      values[2 * a + 1] = avg - detail[a];
    }
  }
  return DyadicSignal(grid, std::move(values));
}

namespace {

void require_scale(const GridSpec& grid, int m, int lo, const char* what) {
  if (m < lo || m > grid.level()) {
    throw std::out_of_range(std::string(what) + " scale " + std::to_string(m) + " outside [" +
                            std::to_string(lo) + ", " + std::to_string(grid.level()) + "]");
  }
}

std::vector<double> detail_component(const HaarCoefficients& coefficients, int m) {
  const GridSpec& grid = coefficients.grid;
  const int scale = m - 1;
  const auto& detail = coefficients.detail[static_cast<std::size_t>(scale)];
  const std::size_t width = std::size_t{1} << (grid.level() - scale);
  std::vector<double> values(grid.size());
  for (std::size_t a = 0; a < detail.size(); ++a) {
    for (std::size_t j = 0; j < width; ++j) {
      values[a * width + j] = j < width / 2 ? detail[a] : -detail[a];
    }
  }
  return values;
}

}  // namespace

DyadicSignal delta(const DyadicSignal& f, int m) {
  require_scale(f.grid(), m, 1, "delta");
  return DyadicSignal(f.grid(), detail_component(haar_analyze(f), m));
}

DyadicSignal expectation(const DyadicSignal& f, int i) {
  const GridSpec& grid = f.grid();
  require_scale(grid, i, 0, "expectation");
  std::vector<double> averages(f.values().begin(), f.values().end());
  for (int scale = grid.level() - 1; scale >= i; --scale) {
    const std::size_t count = std::size_t{1} << scale;
    for (std::size_t a = 0; a < count; ++a) {
      averages[a] = 0.5 * (averages[2 * a] + averages[2 * a + 1]);
    }
  }
  const std::size_t width = std::size_t{1} << (grid.level() - i);
  std::vector<double> values(grid.size());
  for (std::size_t j = 0; j < values.size(); ++j) values[j] = averages[j / width];
  return DyadicSignal(grid, std::move(values));
}

ScaleFamily make_discrete_family(const DyadicSignal& f, int i_min, int i_max) {
  const GridSpec& grid = f.grid();
  if (i_min < 1 || i_max > grid.level() || i_min > i_max) {
    throw std::out_of_range("discrete family range must satisfy 1 <= i_min <= i_max <= L");
  }
  const HaarCoefficients coefficients = haar_analyze(f);
  std::vector<DyadicSignal> components;
  for (int i = i_min; i <= i_max; ++i) {
    components.emplace_back(grid, detail_component(coefficients, i));
  }
  return ScaleFamily(grid, i_min, Flavor::Discrete, std::move(components));
}

double discrete_projection_error(const ScaleFamily& family) {
  double worst = 0.0;
  for (int i = family.i_min(); i <= family.i_max(); ++i) {
    const DyadicSignal& c = family.component(i);
    if (i < 1 || i > c.grid().level()) return std::numeric_limits<double>::infinity();
    const DyadicSignal projected = delta(c, i);
    double diff = 0.0;
    double size = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
      diff = std::max(diff, std::abs(c[j] - projected[j]));
      size = std::max(size, std::abs(c[j]));
    }
    worst = std::max(worst, diff / std::max(size, 1e-300));
  }
  return worst;
}

DyadicSignal family_sum(const ScaleFamily& family) {
  std::vector<double> values(family.grid().size(), 0.0);
  for (const auto& c : family.components()) {
    for (std::size_t j = 0; j < values.size(); ++j) values[j] += c[j];
  }
  return DyadicSignal(family.grid(), std::move(values));
}

void validate_discrete(const ScaleFamily& family) {
  const double err = discrete_projection_error(family);
  if (!(err <= kDiscreteValidationTolerance)) {
    throw std::invalid_argument("family is not spanned by Haar functions at its scales "
                                "(relative projection error " +
                                std::to_string(err) + ")");
  }
}

}  // namespace paravar
