#include "paravar/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "paravar/haar.hpp"

namespace paravar {

namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

// Planning is not thread-safe in FFTW; execution with the new-array API is.
const PlanPair& plans_for(const GridSpec& grid) {
  static std::mutex mutex;
  static std::map<int, PlanPair> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(grid.level());
  if (it != cache.end()) return it->second;
  const int n = static_cast<int>(grid.size());
  std::vector<double> real(grid.size());
  std::vector<fftw_complex> cplx(grid.size() / 2 + 1);
  PlanPair plans;
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  plans.forward = fftw_plan_dft_r2c_1d(n, real.data(), cplx.data(), flags);
  plans.backward = fftw_plan_dft_c2r_1d(n, cplx.data(), real.data(), flags);
  return cache.emplace(grid.level(), plans).first->second;
}

}  // namespace

Spectrum::Spectrum(GridSpec grid, std::vector<std::complex<double>> half)
    : grid_(grid), half_(std::move(half)) {
  if (half_.size() != grid_.size() / 2 + 1) throw std::invalid_argument("spectrum size mismatch");
}

std::complex<double> Spectrum::at(int k) const {
  const int n = static_cast<int>(grid_.size());
  if (k <= -n / 2 || k > n / 2) throw std::out_of_range("frequency outside (-n/2, n/2]");
  return k >= 0 ? half_[static_cast<std::size_t>(k)] : std::conj(half_[static_cast<std::size_t>(-k)]);
}

Spectrum forward_transform(const DyadicSignal& f) {
  const GridSpec& grid = f.grid();
  std::vector<double> in(f.values().begin(), f.values().end());
  std::vector<std::complex<double>> out(grid.size() / 2 + 1);
  fftw_execute_dft_r2c(plans_for(grid).forward, in.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = grid.weight();
  for (auto& c : out) c *= scale;
  return Spectrum(grid, std::move(out));
}

DyadicSignal inverse_transform(const Spectrum& spectrum) {
  const GridSpec& grid = spectrum.grid();
  auto in = spectrum.half();
  // Real signals have real DC and Nyquist coefficients.
  in.front().imag(0.0);
  in.back().imag(0.0);
  std::vector<double> out(grid.size());
  fftw_execute_dft_c2r(plans_for(grid).backward, reinterpret_cast<fftw_complex*>(in.data()),
                       out.data());
  return DyadicSignal(grid, std::move(out));
}

const char* to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::Bandpass:
      return "bandpass";
    case ProfileKind::Lowpass:
      return "lowpass";
    case ProfileKind::Partition:
      return "partition";
  }
  return "?";
}

ProfileKind profile_kind_from_string(std::string_view name) {
  if (name == "bandpass") return ProfileKind::Bandpass;
  if (name == "lowpass") return ProfileKind::Lowpass;
  if (name == "partition") return ProfileKind::Partition;
  throw std::invalid_argument("unknown profile kind '" + std::string(name) + "'");
}

BandProfile::BandProfile(ProfileKind kind, int bandwidth, double epsilon)
    : kind_(kind), bandwidth_(kind == ProfileKind::Partition ? 1 : bandwidth), epsilon_(epsilon) {
  if (bandwidth_ < 1) throw std::invalid_argument("profile bandwidth must be >= 1");
  if (!(epsilon_ > 0.0)) throw std::invalid_argument("profile epsilon must be positive");
}

namespace {

double rise(double s) {  // 0 at s=0, 1 at s=1, C^1 at both ends
  const double c = std::sin(0.5 * std::numbers::pi * s);
  return c * c;
}

double lowpass_value(double xi, int bandwidth) {
  const double a = std::abs(xi);
  const double plateau = std::ldexp(1.0, bandwidth - 1);
  if (a <= plateau) return 1.0;
  if (a >= 2.0 * plateau) return 0.0;
  return 1.0 - rise(a / plateau - 1.0);
}

}  // namespace

double BandProfile::operator()(double xi) const {
  switch (kind_) {
    case ProfileKind::Lowpass:
      return lowpass_value(xi, bandwidth_);
    case ProfileKind::Partition:
      return lowpass_value(xi, 1) - lowpass_value(2.0 * xi, 1);
    case ProfileKind::Bandpass: {
      const double a = std::abs(xi);
      const double lo = std::ldexp(1.0, -bandwidth_);
      const double hi = std::ldexp(1.0, bandwidth_);
      if (a <= lo || a >= hi) return 0.0;
      if (a < 2.0 * lo) return rise(std::log2(a) + bandwidth_);
      if (a <= 0.5 * hi) return 1.0;
      return 1.0 - rise(std::log2(a) - (bandwidth_ - 1));
    }
  }
  return 0.0;
}

double BandProfile::multiplier(int k, int i) const {
  return (*this)(std::ldexp(static_cast<double>(k), -i));
}

BandProfile make_profile(ProfileKind kind, int bandwidth, double epsilon) {
  return BandProfile(kind, bandwidth, epsilon);
}

DyadicSignal convolve_scale(const DyadicSignal& f, const BandProfile& profile, int i) {
  // The mean is carried separately so that constants pass through exactly.
  const double avg = mean(f);
  std::vector<double> centred(f.values().begin(), f.values().end());
  for (double& v : centred) v -= avg;
  Spectrum spectrum = forward_transform(DyadicSignal(f.grid(), std::move(centred)));
  auto& half = spectrum.half();
  half[0] = 0.0;
  for (std::size_t k = 1; k < half.size(); ++k) half[k] *= profile.multiplier(static_cast<int>(k), i);
  DyadicSignal out = inverse_transform(spectrum);
  const double dc = profile.multiplier(0, i) * avg;
  if (dc == 0.0) return out;
  std::vector<double> values(out.values().begin(), out.values().end());
  for (double& v : values) v += dc;
  return DyadicSignal(f.grid(), std::move(values));
}

ScaleFamily make_continuous_family(const DyadicSignal& f, const BandProfile& profile, int i_min,
                                   int i_max) {
  if (!profile.is_bandpass()) throw std::invalid_argument("continuous families need a bandpass profile");
  if (i_min > i_max) throw std::out_of_range("empty scale range");
  std::vector<DyadicSignal> components;
  for (int i = i_min; i <= i_max; ++i) components.push_back(convolve_scale(f, profile, i));
  return ScaleFamily(f.grid(), i_min, Flavor::Continuous, std::move(components),
                     profile.bandwidth());
}

ScaleFamily convolve_family(const ScaleFamily& data, const BandProfile& profile) {
  if (!profile.is_bandpass()) throw std::invalid_argument("continuous families need a bandpass profile");
  std::vector<DyadicSignal> components;
  for (int i = data.i_min(); i <= data.i_max(); ++i) {
    components.push_back(convolve_scale(data.component(i), profile, i));
  }
  return ScaleFamily(data.grid(), data.i_min(), Flavor::Continuous, std::move(components),
                     profile.bandwidth());
}

BandwidthReport bandwidth_check(const ScaleFamily& family) {
  BandwidthReport report;
  if (family.flavor() != Flavor::Continuous) {
    throw std::invalid_argument("bandwidth_check requires a continuous family");
  }
  const int bw = family.bandwidth();
  for (int i = family.i_min(); i <= family.i_max(); ++i) {
    const Spectrum spectrum = forward_transform(family.component(i));
    const double lo = std::ldexp(1.0, i - bw);
    const double hi = std::ldexp(1.0, i + bw);
    double peak = 0.0;
    double out_peak = 0.0;
    double energy = 0.0;
    double out_energy = 0.0;
    for (int k = 0; k <= spectrum.nyquist(); ++k) {
      const double mag = std::abs(spectrum.half()[static_cast<std::size_t>(k)]);
      const double weight = (k == 0 || k == spectrum.nyquist()) ? 1.0 : 2.0;
      peak = std::max(peak, mag);
      energy += weight * mag * mag;
      const bool in_band = lo < k && k < hi;
      if (!in_band) {
        out_peak = std::max(out_peak, mag);
        out_energy += weight * mag * mag;
      }
    }
    if (peak == 0.0) continue;
    const double rel = out_peak / peak;
    report.max_relative_coefficient = std::max(report.max_relative_coefficient, rel);
    report.max_out_of_band_energy = std::max(report.max_out_of_band_energy, out_energy / energy);
    if (rel > kBandwidthTolerance) report.ok = false;
  }
  return report;
}

DyadicSignal jsw_square_function(const DyadicSignal& f, const BandProfile& lowpass) {
  if (lowpass.kind() != ProfileKind::Lowpass) {
    throw std::invalid_argument("square function comparison needs a lowpass profile");
  }
  const GridSpec& grid = f.grid();
  std::vector<double> acc(grid.size(), 0.0);
  for (int i = 0; i <= grid.level(); ++i) {
    const DyadicSignal e = expectation(f, i);
    const DyadicSignal c = convolve_scale(f, lowpass, i);
    for (std::size_t j = 0; j < acc.size(); ++j) {
      const double d = e[j] - c[j];
      acc[j] += d * d;
    }
  }
  for (double& v : acc) v = std::sqrt(v);
  return DyadicSignal(grid, std::move(acc));
}

std::vector<double> scale_kernel(const GridSpec& grid, const BandProfile& profile, int i) {
  std::vector<std::complex<double>> half(grid.size() / 2 + 1);
  for (std::size_t k = 0; k < half.size(); ++k) {
    half[k] = profile.multiplier(static_cast<int>(k), i) * grid.weight();
  }
  const DyadicSignal kernel = inverse_transform(Spectrum(grid, std::move(half)));
  return {kernel.values().begin(), kernel.values().end()};
}

double majorant_constant(const GridSpec& grid, const BandProfile& profile, int i) {
  const std::vector<double> w = scale_kernel(grid, profile, i);
  const std::size_t n = grid.size();
  const std::size_t half = n / 2;
  std::vector<double> by_distance(half + 1, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t d = std::min(j, n - j);
    by_distance[d] = std::max(by_distance[d], std::abs(w[j]));
  }
  for (std::size_t d = half; d-- > 0;) by_distance[d] = std::max(by_distance[d], by_distance[d + 1]);
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) total += by_distance[std::min(j, n - j)];
  return total;
}

double majorant_constant(const GridSpec& grid, const BandProfile& profile, int i_min, int i_max) {
  double best = 0.0;
  for (int i = i_min; i <= i_max; ++i) best = std::max(best, majorant_constant(grid, profile, i));
  return best;
}

}  // namespace paravar
