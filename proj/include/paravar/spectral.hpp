#pragma once

#include <complex>
#include <vector>

#include "paravar/family.hpp"
#include "paravar/grid.hpp"

namespace paravar {

/// Fourier coefficients f^(k) = (1/n) sum_j f_j e^{-2 pi i k j / n} of a real
/// signal, stored for k = 0..n/2; negative frequencies follow by conjugation.
class Spectrum {
 public:
  Spectrum(GridSpec grid, std::vector<std::complex<double>> half);

  const GridSpec& grid() const { return grid_; }
  /// Highest stored frequency, n/2.
  int nyquist() const { return static_cast<int>(half_.size()) - 1; }
  /// Coefficient at integer frequency k in (-n/2, n/2].
  std::complex<double> at(int k) const;
  const std::vector<std::complex<double>>& half() const { return half_; }
  std::vector<std::complex<double>>& half() { return half_; }

 private:
  GridSpec grid_;
  std::vector<std::complex<double>> half_;
};

Spectrum forward_transform(const DyadicSignal& f);
DyadicSignal inverse_transform(const Spectrum& spectrum);

enum class ProfileKind {
  Bandpass,   ///< raised cosine in log2|xi|: 1 on [2^(1-N), 2^(N-1)], 0 outside (2^-N, 2^N)
  Lowpass,    ///< 1 on |xi| <= 2^(N-1), 0 for |xi| >= 2^N, raised cosine between
  Partition,  ///< lowpass(xi) - lowpass(2 xi) with N = 1; its dilates telescope
};

const char* to_string(ProfileKind kind);
ProfileKind profile_kind_from_string(std::string_view name);

/// Even, real frequency symbol phi^(xi).
class BandProfile {
 public:
  BandProfile(ProfileKind kind, int bandwidth, double epsilon);

  ProfileKind kind() const { return kind_; }
  int bandwidth() const { return bandwidth_; }
  /// Decay exponent used in far-field diagnostics.
  double epsilon() const { return epsilon_; }
  bool is_bandpass() const { return kind_ != ProfileKind::Lowpass; }

  double operator()(double xi) const;
  /// Multiplier of scale i at integer frequency k: phi^(k / 2^i).
  double multiplier(int k, int i) const;

  friend bool operator==(const BandProfile&, const BandProfile&) = default;

 private:
  ProfileKind kind_;
  int bandwidth_;
  double epsilon_;
};

/// Partition profiles always have bandwidth 1; `bandwidth` is ignored for them.
BandProfile make_profile(ProfileKind kind, int bandwidth, double epsilon = 1.0);

/// Inverse transform of f^(k) phi^(k/2^i).
DyadicSignal convolve_scale(const DyadicSignal& f, const BandProfile& profile, int i);

/// Components f_i = phi_i * f for i_min <= i <= i_max. Requires a bandpass profile.
ScaleFamily make_continuous_family(const DyadicSignal& f, const BandProfile& profile, int i_min,
                                   int i_max);

/// phi_i * f_i applied componentwise to arbitrary per-scale data.
ScaleFamily convolve_family(const ScaleFamily& data, const BandProfile& profile);

struct BandwidthReport {
  bool ok = true;
  /// Largest out-of-band coefficient magnitude relative to the component's
  /// largest coefficient.
  double max_relative_coefficient = 0.0;
  /// Largest out-of-band energy fraction of a component.
  double max_out_of_band_energy = 0.0;
};

inline constexpr double kBandwidthTolerance = 1e-10;

/// Checks that every component f_i has spectrum in 2^(i-N) < |k| < 2^(i+N).
BandwidthReport bandwidth_check(const ScaleFamily& family);

/// S f = (sum_{i=0}^{L} |E_i f - phi_i * f|^2)^(1/2) with a lowpass profile.
DyadicSignal jsw_square_function(const DyadicSignal& f, const BandProfile& lowpass);

/// Space-side weights w with (phi_i * f)(x) = sum_j w[j] f(x - j).
std::vector<double> scale_kernel(const GridSpec& grid, const BandProfile& profile, int i);

/// Sum of the even, decreasing (in periodic distance) majorant of |w|; bounds
/// |phi_i * f| <= C M f pointwise for the all-aligned maximal function.
double majorant_constant(const GridSpec& grid, const BandProfile& profile, int i);

/// max over i_min <= i <= i_max of majorant_constant.
double majorant_constant(const GridSpec& grid, const BandProfile& profile, int i_min, int i_max);

}  // namespace paravar
