#include "paravar/family.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace paravar {

const char* to_string(Flavor flavor) {
  switch (flavor) {
    case Flavor::Discrete:
      return "discrete";
    case Flavor::Continuous:
      return "continuous";
    case Flavor::Raw:
      return "raw";
  }
  return "?";
}

Flavor flavor_from_string(std::string_view name) {
  if (name == "discrete") return Flavor::Discrete;
  if (name == "continuous") return Flavor::Continuous;
  if (name == "raw") return Flavor::Raw;
  throw std::invalid_argument("unknown flavor '" + std::string(name) + "'");
}

ScaleFamily::ScaleFamily(GridSpec grid, int i_min, Flavor flavor,
                         std::vector<DyadicSignal> components, int bandwidth)
    : grid_(grid), i_min_(i_min), flavor_(flavor), bandwidth_(bandwidth),
      components_(std::move(components)) {
  if (components_.empty()) throw std::invalid_argument("scale family must be nonempty");
  for (const auto& c : components_) {
    if (c.grid() != grid_) throw std::invalid_argument("family component on a different grid");
  }
  if (flavor_ == Flavor::Discrete && (i_min_ < 1 || i_max() > grid_.level())) {
    throw std::invalid_argument("discrete family scales must lie in [1, L]");
  }
  if (flavor_ == Flavor::Continuous && bandwidth_ < 1) {
    throw std::invalid_argument("continuous family needs bandwidth >= 1");
  }
}

const DyadicSignal& ScaleFamily::component(int i) const {
  if (i < i_min() || i > i_max()) {
    throw std::out_of_range("scale " + std::to_string(i) + " outside family range");
  }
  return components_[static_cast<std::size_t>(i - i_min_)];
}

ScaleFamily ScaleFamily::scaled(double alpha) const {
  std::vector<DyadicSignal> out;
  out.reserve(components_.size());
  for (const auto& c : components_) out.push_back(alpha * c);
  return with_components(std::move(out));
}

ScaleFamily ScaleFamily::with_components(std::vector<DyadicSignal> components) const {
  return ScaleFamily(grid_, i_min_, flavor_, std::move(components), bandwidth_);
}

DyadicSignal height(const ScaleFamily& family, double r) {
  if (!(r >= 1.0)) throw std::invalid_argument("height exponent r must be >= 1");
  const std::size_t n = family.grid().size();
  std::vector<double> out(n, 0.0);
  if (std::isinf(r)) {
    for (const auto& c : family.components()) {
      for (std::size_t j = 0; j < n; ++j) out[j] = std::max(out[j], std::abs(c[j]));
    }
    return DyadicSignal(family.grid(), std::move(out));
  }
  for (const auto& c : family.components()) {
    for (std::size_t j = 0; j < n; ++j) {
      out[j] += r == 1.0 ? std::abs(c[j]) : std::pow(std::abs(c[j]), r);
    }
  }
  if (r != 1.0) {
    for (double& v : out) v = r == 2.0 ? std::sqrt(v) : std::pow(v, 1.0 / r);
  }
  return DyadicSignal(family.grid(), std::move(out));
}

double mixed_norm(const ScaleFamily& family, double p, double r) {
  return lp_norm(height(family, r), p);
}

void require_compatible(const ScaleFamily& a, const ScaleFamily& b) {
  if (a.grid() != b.grid()) throw std::invalid_argument("families live on different grids");
  if (a.i_min() != b.i_min() || a.i_max() != b.i_max()) {
    throw std::invalid_argument("families have different scale ranges");
  }
}

}  // namespace paravar
