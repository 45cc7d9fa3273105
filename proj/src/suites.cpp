#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <random>

#include "paravar/blocksum.hpp"
#include "paravar/localize.hpp"
#include "paravar/variation.hpp"
#include "paravar/verify.hpp"

namespace paravar {

namespace {

constexpr std::array<Distribution, 4> kDistributions = {
    Distribution::Gaussian, Distribution::Rademacher, Distribution::Sparse, Distribution::Lacunary};

GridSpec random_grid(std::mt19937_64& rng, int min_level, int max_level) {
  if (min_level < 1 || max_level < min_level) throw std::invalid_argument("bad level range");
  const int span = max_level - min_level + 1;
  return GridSpec(min_level + static_cast<int>(rng() % static_cast<std::uint64_t>(span)));
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Oracle for one adapted stage, straight from the definition with direct sums:
// the first local m in (a, scales] where |S(a, m]| or an intermediate product
// |F(a, m']| |G(m', m]| reaches the threshold.
struct OracleStop {
  int stop = -1;
  Trigger kind = Trigger::Forced;
};

OracleStop oracle_stop(const std::vector<double>& f, const std::vector<double>& g, int a,
                       double threshold) {
  const int scales = static_cast<int>(f.size());
  for (int m = a + 1; m <= scales; ++m) {
    const bool one = std::abs(direct_bilinear(f, g, a, m)) >= threshold;
    bool two = false;
    for (int split = a + 1; split < m; ++split) {
      double fs = 0.0;
      double gs = 0.0;
      for (int i = a; i < split; ++i) fs += f[static_cast<std::size_t>(i)];
      for (int j = split; j < m; ++j) gs += g[static_cast<std::size_t>(j)];
      if (std::abs(fs) * std::abs(gs) >= threshold) two = true;
    }
    if (one && two) return {m, Trigger::Both};
    if (one) return {m, Trigger::Bilinear};
    if (two) return {m, Trigger::Product};
  }
  return {};
}

// Counts samples whose adapted sequence disagrees with the oracle.
std::size_t minimality_failures(const AdaptedStoppingTime& adapted, const ScaleFamily& f,
                                const ScaleFamily& g) {
  const GridSpec& grid = f.grid();
  const int base = f.i_min() - 1;
  const int scales = f.scale_count();
  const double threshold = adapted.lambda / 4.0;
  std::vector<std::vector<double>> fv;
  std::vector<std::vector<double>> gv;
  for (std::size_t x = 0; x < grid.size(); ++x) {
    fv.push_back(sample_values(f, x));
    gv.push_back(sample_values(g, x));
  }
  std::vector<std::vector<std::optional<OracleStop>>> memo(
      grid.size(), std::vector<std::optional<OracleStop>>(static_cast<std::size_t>(scales + 1)));
  auto stop_at = [&](std::size_t x, int a) {
    auto& slot = memo[x][static_cast<std::size_t>(a)];
    if (!slot) slot = oracle_stop(fv[x], gv[x], a, threshold);
    return *slot;
  };
  auto top_triggers = [&](std::size_t x, int a) {
    const DyadicInterval top = DyadicInterval::containing(grid, base + a, x);
    const std::size_t first = top.first_sample(grid);
    for (std::size_t y = first; y < first + top.sample_count(grid); ++y) {
      if (stop_at(y, a).stop >= 0) return true;
    }
    return false;
  };

  std::size_t failures = 0;
  for (std::size_t x = 0; x < grid.size(); ++x) {
    const auto& seq = adapted.times.sequences[x];
    const auto& kinds = adapted.triggers[x];
    bool ok = !seq.empty() && seq.size() == kinds.size() && seq.front() == base &&
              kinds.front() == Trigger::Initial && seq.back() == base + scales;
    for (std::size_t k = 1; ok && k < seq.size(); ++k) {
      const int a = seq[k - 1] - base;
      const int b = seq[k] - base;
      const OracleStop expected = stop_at(x, a);
      switch (kinds[k]) {
        case Trigger::Bilinear:
        case Trigger::Product:
        case Trigger::Both:
          ok = expected.stop == b && expected.kind == kinds[k];
          break;
        case Trigger::Forced:
          ok = b == a + 1 && !top_triggers(x, a);
          break;
        case Trigger::Exhausted:
          ok = b == scales && expected.stop < 0 && top_triggers(x, a);
          break;
        case Trigger::Initial:
          ok = false;
          break;
      }
    }
    if (!ok) ++failures;
  }
  return failures;
}

}  // namespace

StoppingSuiteReport run_stopping_suite(std::uint64_t seed, std::size_t trials, int min_level,
                                       int max_level) {
  struct Outcome {
    bool stopping = true;
    std::size_t windows = 0;
    std::size_t violations = 0;
    std::size_t minimality = 0;
    std::size_t accounting = 0;
  };
  std::vector<Outcome> outcomes(trials);
  parallel_for(trials, [&](std::size_t k) {
    std::mt19937_64 rng(mix_seed(seed, k));
    const GridSpec grid = random_grid(rng, min_level, max_level);
    const int level = grid.level();
    const int i_min = level >= 3 ? 1 + static_cast<int>(rng() % 2) : 1;
    const int i_max = level >= 3 && (rng() & 1) ? level - 1 : level;
    GeneratorSpec spec;
    spec.distribution = kDistributions[k % kDistributions.size()];
    const ScaleFamily f = gen_discrete(rng(), grid, i_min, i_max, spec);
    const ScaleFamily g = gen_discrete(rng(), grid, i_min, i_max, spec);
    const BlockSumTable table = BlockSumTable::build(f, g, 2);

    double peak = 0.0;
    for (std::size_t x = 0; x < grid.size(); ++x) {
      const BlockValues values = table.bilinear_values(x);
      for (int a = 0; a < values.scale_count(); ++a) {
        for (int b = a + 1; b <= values.scale_count(); ++b) peak = std::max(peak, std::abs(values.get(a, b)));
      }
    }
    const double lambda = std::max(peak, 1e-6) * uniform(rng, 0.02, 1.1);
    const AdaptedStoppingTime adapted = build_adapted(f, g, lambda);

    Outcome& out = outcomes[k];
    out.stopping = is_stopping_time(adapted.times);
    for (int round = 0; round < 4; ++round) {
      const double density = uniform(rng, 0.05, 0.9);
      const StoppingTime arbitrary = round % 2 == 0
                                         ? random_sequences(rng(), grid, i_min - 1, i_max, density)
                                         : random_stopping_time(rng(), grid, i_min - 1, i_max, density);
      const SqueezeReport squeeze = verify_squeeze(arbitrary, table, adapted, lambda);
      out.windows += squeeze.windows_checked;
      out.violations += squeeze.violations.size();
    }
    out.minimality = minimality_failures(adapted, f, g);

    const double jump_level = std::nextafter(std::sqrt(lambda) / 2.0, 0.0);
    const std::vector<std::size_t> products = product_stop_counts(adapted);
    for (std::size_t x = 0; x < grid.size(); ++x) {
      const std::size_t budget = jump_count(table.linear_values(x, 0), jump_level).count +
                                 jump_count(table.linear_values(x, 1), jump_level).count;
      if (products[x] > budget) ++out.accounting;
    }
  });

  StoppingSuiteReport report;
  report.trials = trials;
  for (const auto& out : outcomes) {
    report.not_stopping_times += out.stopping ? 0 : 1;
    report.squeeze_windows += out.windows;
    report.squeeze_violations += out.violations;
    report.minimality_failures += out.minimality;
    report.accounting_failures += out.accounting;
  }
  return report;
}

bool CZSuiteReport::ok() const {
  constexpr double slack = 1.0 + 1e-12;
  return trials > 0 && max_reconstruction <= kIdentityThreshold && max_mean <= kIdentityThreshold &&
         max_height_ratio <= slack && max_exceptional_ratio <= slack && max_good_norm_ratio <= slack;
}

CZSuiteReport run_cz_suite(std::uint64_t seed, std::size_t trials, int min_level, int max_level) {
  std::vector<CZSuiteReport> partial(trials);
  parallel_for(trials, [&](std::size_t k) {
    std::mt19937_64 rng(mix_seed(seed, k));
    const GridSpec grid = random_grid(rng, min_level, max_level);
    const int level = grid.level();
    GeneratorSpec spec;
    spec.distribution = kDistributions[k % kDistributions.size()];
    std::optional<ScaleFamily> family;
    switch (k % 3) {
      case 0:
        family = gen_discrete(rng(), grid, 1, level, spec);
        break;
      case 1:
        family = gen_raw(rng(), grid, 1, level, spec);
        break;
      default:
        family = gen_continuous(rng(), grid, 1, std::max(1, level - 2), make_profile(ProfileKind::Bandpass, 1), spec);
        break;
    }
    constexpr std::array<double, 3> rs = {1.0, 1.5, 2.0};
    const double r = rs[(k / 3) % rs.size()];
    const WindowPolicy windows = (k / 9) % 2 ? WindowPolicy::AllAligned : WindowPolicy::Dyadic;
    const DyadicSignal h = height(*family, r);
    const double lo = mean(h);
    const double hi = lp_norm(h, INFINITY);
    CZSuiteReport& out = partial[k];
    out.trials = 1;
    if (!(hi > 0.0)) return;
    const double lambda = lo + uniform(rng, 0.0, 1.0) * (hi - lo);
    const CZDecomposition cz = cz_decompose(*family, lambda, r, windows);
    out.selected_intervals = cz.intervals.size();

    for (int c = 0; c < family->scale_count(); ++c) {
      const double scale = 1.0 + lp_norm(family->at(c), INFINITY);
      for (std::size_t x = 0; x < grid.size(); ++x) {
        double acc = cz.good.at(c)[x];
        for (const auto& bad : cz.bad) acc += bad.at(c)[x];
        out.max_reconstruction = std::max(out.max_reconstruction, std::abs(acc - family->at(c)[x]) / scale);
      }
      for (std::size_t b = 0; b < cz.intervals.size(); ++b) {
        const auto values = cz.bad[b].at(c).values();
        const std::size_t first = cz.intervals[b].first_sample(grid);
        const std::size_t count = cz.intervals[b].sample_count(grid);
        const double avg = pairwise_sum(values.subspan(first, count)) / static_cast<double>(count);
        out.max_mean = std::max(out.max_mean, std::abs(avg) / scale);
      }
    }
    const DyadicSignal good_height = height(cz.good, r);
    out.max_height_ratio = lp_norm(good_height, INFINITY) / (2.0 * lambda);
    const double norm = mixed_norm(*family, 1.0, r);
    out.max_exceptional_ratio = cz.exceptional_measure * lambda / (maximal_weak_constant(windows) * norm);
    const double good_norm = std::pow(mixed_norm(cz.good, r, r), r);
    out.max_good_norm_ratio = good_norm / (std::pow(2.0 * lambda, r - 1.0) * norm);
  });

  CZSuiteReport report;
  for (const auto& out : partial) {
    report.trials += out.trials;
    report.max_reconstruction = std::max(report.max_reconstruction, out.max_reconstruction);
    report.max_mean = std::max(report.max_mean, out.max_mean);
    report.max_height_ratio = std::max(report.max_height_ratio, out.max_height_ratio);
    report.max_exceptional_ratio = std::max(report.max_exceptional_ratio, out.max_exceptional_ratio);
    report.max_good_norm_ratio = std::max(report.max_good_norm_ratio, out.max_good_norm_ratio);
    report.selected_intervals += out.selected_intervals;
  }
  return report;
}

SpectralSuiteReport run_spectral_suite(std::uint64_t seed, std::size_t families, std::size_t signals,
                                       int min_level, int max_level) {
  SpectralSuiteReport report;
  report.families = families;
  report.signals = signals;

  std::vector<BandwidthReport> bands(families);
  parallel_for(families, [&](std::size_t k) {
    std::mt19937_64 rng(mix_seed(seed, k));
    const GridSpec grid = random_grid(rng, std::max(min_level, 5), std::max(max_level, 5));
    const int bandwidth = 1 + static_cast<int>(rng() % 3);
    const int top = grid.level() - 1 - bandwidth;
    const int i_max = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(std::max(1, top)));
    const int i_min = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(i_max));
    GeneratorSpec spec;
    spec.distribution = kDistributions[k % kDistributions.size()];
    bands[k] = bandwidth_check(gen_continuous(rng(), grid, i_min, i_max,
                                              make_profile(ProfileKind::Bandpass, bandwidth), spec));
  });
  for (const auto& band : bands) {
    report.bandwidth_failures += band.ok ? 0 : 1;
    report.max_out_of_band = std::max(report.max_out_of_band, band.max_relative_coefficient);
  }

  struct SignalOutcome {
    double ratio = 0.0;
    std::size_t violations = 0;
    double constant_jsw = 0.0;
  };
  std::vector<SignalOutcome> outcomes(signals);
  parallel_for(signals, [&](std::size_t k) {
    std::mt19937_64 rng(mix_seed(seed ^ 0x5A5A5A5AULL, k));
    const GridSpec grid = random_grid(rng, min_level, max_level);
    GeneratorSpec spec;
    spec.distribution = kDistributions[k % kDistributions.size()];
    const DyadicSignal f = gen_signal(rng(), grid, spec) + DyadicSignal::constant(grid, uniform(rng, -1.0, 1.0));
    constexpr std::array<ProfileKind, 3> kinds = {ProfileKind::Bandpass, ProfileKind::Lowpass,
                                                  ProfileKind::Partition};
    const BandProfile profile = make_profile(kinds[k % kinds.size()], 1 + static_cast<int>(rng() % 3));
    const DyadicSignal mf = maximal_function(f, WindowPolicy::AllAligned);
    const double sup = lp_norm(f, INFINITY);
    SignalOutcome& out = outcomes[k];
    for (int i = 0; i <= grid.level(); ++i) {
      const double constant = majorant_constant(grid, profile, i);
      const DyadicSignal conv = convolve_scale(f, profile, i);
      for (std::size_t x = 0; x < grid.size(); ++x) {
        const double bound = constant * mf[x];
        if (bound > 0.0) out.ratio = std::max(out.ratio, std::abs(conv[x]) / bound);
        if (std::abs(conv[x]) > bound * (1.0 + 1e-12) + 1e-14 * sup) ++out.violations;
      }
    }
    const double c = uniform(rng, -4.0, 4.0);
    const DyadicSignal sc = jsw_square_function(DyadicSignal::constant(grid, c), make_profile(ProfileKind::Lowpass, 1));
    out.constant_jsw = c == 0.0 ? lp_norm(sc, INFINITY) : lp_norm(sc, INFINITY) / std::abs(c);
  });
  for (const auto& out : outcomes) {
    report.max_fefferman_stein_ratio = std::max(report.max_fefferman_stein_ratio, out.ratio);
    report.fefferman_stein_violations += out.violations;
    report.max_constant_jsw = std::max(report.max_constant_jsw, out.constant_jsw);
  }
  return report;
}

}  // namespace paravar
