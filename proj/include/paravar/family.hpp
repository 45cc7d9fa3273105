#pragma once

#include <vector>

#include "paravar/grid.hpp"

namespace paravar {

enum class Flavor {
  Discrete,    ///< f_i spanned by Haar functions of intervals of length 2^(1-i)
  Continuous,  ///< f_i with spectrum in 2^(i-N) < |xi| < 2^(i+N)
  Raw,         ///< arbitrary per-scale data (no Littlewood-Paley structure)
};

const char* to_string(Flavor flavor);
Flavor flavor_from_string(std::string_view name);

/// Indexed collection {f_i : i_min <= i <= i_max} of signals on one grid.
/// Components are stored in scale order; component(i) uses the global scale.
class ScaleFamily {
 public:
  ScaleFamily(GridSpec grid, int i_min, Flavor flavor, std::vector<DyadicSignal> components,
              int bandwidth = 0);

  const GridSpec& grid() const { return grid_; }
  int i_min() const { return i_min_; }
  int i_max() const { return i_min_ + static_cast<int>(components_.size()) - 1; }
  int scale_count() const { return static_cast<int>(components_.size()); }
  Flavor flavor() const { return flavor_; }
  int bandwidth() const { return bandwidth_; }

  const DyadicSignal& component(int i) const;
  /// Component by local position 0..scale_count()-1.
  const DyadicSignal& at(int local) const { return components_[static_cast<std::size_t>(local)]; }
  const std::vector<DyadicSignal>& components() const { return components_; }

  /// Same layout with every component scaled by alpha.
  ScaleFamily scaled(double alpha) const;
  ScaleFamily with_components(std::vector<DyadicSignal> components) const;

  friend bool operator==(const ScaleFamily&, const ScaleFamily&) = default;

 private:
  GridSpec grid_;
  int i_min_;
  Flavor flavor_;
  int bandwidth_;
  std::vector<DyadicSignal> components_;
};

/// Pointwise l^r norm across scales, (sum_i |f_i(x)|^r)^(1/r).
DyadicSignal height(const ScaleFamily& family, double r);

/// ||(f_i)||_{p,r} = || (sum_i |f_i|^r)^(1/r) ||_p.
double mixed_norm(const ScaleFamily& family, double p, double r);

/// Throws unless both families share grid and scale range.
void require_compatible(const ScaleFamily& a, const ScaleFamily& b);

}  // namespace paravar
