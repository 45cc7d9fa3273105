#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "paravar/family.hpp"
#include "paravar/grid.hpp"
#include "paravar/spectral.hpp"

namespace paravar {

/// f = good + sum_I bad[I] at level lambda for the l^r height of a family.
struct CZDecomposition {
  double lambda = 0.0;
  double r = 1.0;
  WindowPolicy windows = WindowPolicy::Dyadic;
  /// E = {M(height) > lambda} under `windows`.
  std::vector<bool> exceptional;
  double exceptional_measure = 0.0;
  /// Maximal dyadic intervals whose height average exceeds lambda.
  std::vector<DyadicInterval> intervals;
  /// Union of the selected intervals.
  std::vector<bool> selected_mask;
  ScaleFamily good;
  /// bad[k] is supported on intervals[k], with zero mean per scale there.
  std::vector<ScaleFamily> bad;
};

/// Requires lambda >= mean(height): otherwise the whole circle would be
/// selected and has no parent to bound its average.
CZDecomposition cz_decompose(const ScaleFamily& family, double lambda, double r,
                             WindowPolicy windows);

/// Constants f~_i: average over I of component i when 2^-i > |I|, else 0.
/// Components are taken as already convolved (phi_i * f_i).
struct TildeTruncation {
  DyadicInterval interval;
  int i_min = 0;
  std::vector<double> values;  // by local scale

  double at(int i) const { return values[static_cast<std::size_t>(i - i_min)]; }
};

TildeTruncation make_tilde(const ScaleFamily& convolved, const DyadicInterval& interval);

/// phi_i * f_i - f~_i = h1 + h2 + h3 on interval I:
///   coarse scales (2^-i > |I|): h1 = phi_i * f_i - f~_i, h2 = h3 = 0;
///   fine scales: h2 = phi_i * (f_i 1_3I), h3 = phi_i * (f_i 1_(3I)^c), h1 = 0.
struct LocalSplit {
  DyadicInterval interval;
  TildeTruncation tilde;
  ScaleFamily convolved;  // phi_i * f_i
  ScaleFamily h1;
  ScaleFamily h2;
  ScaleFamily h3;
};

/// `data` holds the raw f_i; when 3I covers the circle h3 is zero.
LocalSplit local_split(const ScaleFamily& data, const BandProfile& profile,
                       const DyadicInterval& interval);

struct FarFieldEntry {
  DyadicInterval interval;
  int scale = 0;
  double mass = 0.0;   // ||phi_i * b_{i,I}||_{L^1((3I)^c)}
  double ratio = 0.0;  // mass / (lambda |I| min(2^i |I|, (2^i |I|)^-eps))
};

struct FarFieldReport {
  double max_ratio = 0.0;
  std::vector<FarFieldEntry> entries;
};

/// Measured far-field decay of the bad parts; intervals whose tripling covers
/// the circle are skipped. epsilon defaults to the profile's.
FarFieldReport far_field_bound(const CZDecomposition& cz, const BandProfile& profile,
                               std::optional<double> epsilon = std::nullopt);
FarFieldReport far_field_bound(const std::vector<ScaleFamily>& bad,
                               const std::vector<DyadicInterval>& intervals, double lambda,
                               const BandProfile& profile, std::optional<double> epsilon = std::nullopt);

struct SharpTargetReport {
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;  // samples with zero right-hand side
};

/// Linear target: (Tf)# vs M_r(height(F, r)) with Tf the pointwise
/// r-variation of the (already convolved) components.
SharpTargetReport sharp_target_check(const ScaleFamily& f, double r, WindowPolicy windows);

/// Bilinear target: lambda^-1 (T_lambda#)^2 vs M_r(height F) M_s(height G) with
/// T_lambda = sup_N (sum_k rho_lambda(S)^(2t))^(1/(2t)).
SharpTargetReport sharp_target_check(const ScaleFamily& f, const ScaleFamily& g,
                                     const ExponentSet& exponents, double lambda,
                                     WindowPolicy windows);

}  // namespace paravar
