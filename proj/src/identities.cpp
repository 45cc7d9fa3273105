#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <stdexcept>

#include "paravar/blocksum.hpp"
#include "paravar/localize.hpp"
#include "paravar/tree.hpp"
#include "paravar/variation.hpp"
#include "paravar/verify.hpp"

namespace paravar {

namespace {

enum Check : std::size_t {
  kHaarReconstruction,
  kHaarOrthogonality,
  kTreeOrthogonality,
  kParaproductTelescoping,
  kBlocksumSplitting,
  kChenMultilinear,
  kUnconstrainedFactorization,
  kBilinearity,
  kEndpointChain,
  kChebyshev,
  kMonotoneT,
  kRhoDomination,
  kHolderUnconstrained,
  kTreeIdentity,
  kAdaptedStoppingTime,
  kSqueeze,
  kCZReconstruction,
  kCZMeanZero,
  kCZHeight,
  kLocalSplit,
  kMultiplierComposition,
  kPartitionOfUnity,
  kCheckCount,
};

constexpr std::array<const char*, kCheckCount> kCheckNames = {
    "haar_reconstruction",
    "haar_orthogonality",
    "tree_orthogonality",
    "paraproduct_telescoping",
    "blocksum_splitting",
    "chen_multilinear",
    "unconstrained_factorization",
    "bilinearity",
    "endpoint_chain_11",
    "chebyshev_weak_le_strong",
    "monotone_in_t",
    "rho_domination",
    "holder_unconstrained",
    "tree_identity",
    "adapted_is_stopping_time",
    "squeeze",
    "cz_reconstruction",
    "cz_mean_zero",
    "cz_height",
    "local_split_reconstruction",
    "multiplier_composition",
    "partition_of_unity",
};

struct Partial {
  std::array<double, kCheckCount> deviation{};
  std::array<std::size_t, kCheckCount> instances{};

  void equal(Check c, double lhs, double rhs, double magnitude) {
    deviation[c] = std::max(deviation[c], std::abs(lhs - rhs) / (1.0 + std::abs(magnitude)));
  }
  void dominated(Check c, double lhs, double rhs) {
    deviation[c] = std::max(deviation[c], std::max(0.0, lhs - rhs) / (1.0 + std::abs(rhs)));
  }
  void flag(Check c, bool failed) {
    if (failed) deviation[c] = std::max(deviation[c], 1.0);
  }
  void count(Check c) { ++instances[c]; }
};

double max_abs(const DyadicSignal& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double inner(const DyadicSignal& a, const DyadicSignal& b) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) acc += a[j] * b[j];
  return acc * a.grid().weight();
}

// Iterated sum over a < i_1 < ... < i_M <= b of prod_m v_m[i_m - 1] by
// explicit nested loops, M <= 3.
double iterated_bruteforce(const std::vector<std::vector<double>>& v, int a, int b) {
  const std::size_t m = v.size();
  double acc = 0.0;
  if (m == 0) return 1.0;
  for (int i = a; i < b; ++i) {
    if (m == 1) {
      acc += v[0][static_cast<std::size_t>(i)];
      continue;
    }
    for (int j = i + 1; j < b; ++j) {
      if (m == 2) {
        acc += v[0][static_cast<std::size_t>(i)] * v[1][static_cast<std::size_t>(j)];
        continue;
      }
      for (int k = j + 1; k < b; ++k) {
        acc += v[0][static_cast<std::size_t>(i)] * v[1][static_cast<std::size_t>(j)] *
               v[2][static_cast<std::size_t>(k)];
      }
    }
  }
  return acc;
}

double abs_sum(const std::vector<double>& v, int a, int b) {
  double acc = 0.0;
  for (int i = a; i < b; ++i) acc += std::abs(v[static_cast<std::size_t>(i)]);
  return acc;
}

double plain_sum(const std::vector<double>& v, int a, int b) {
  double acc = 0.0;
  for (int i = a; i < b; ++i) acc += v[static_cast<std::size_t>(i)];
  return acc;
}

constexpr std::array<Distribution, 4> kDistributions = {
    Distribution::Gaussian, Distribution::Rademacher, Distribution::Sparse, Distribution::Lacunary};

void haar_checks(Partial& out, const DyadicSignal& f, const DyadicSignal& g) {
  const GridSpec& grid = f.grid();
  const int level = grid.level();
  std::vector<DyadicSignal> df;
  std::vector<DyadicSignal> dg;
  for (int m = 1; m <= level; ++m) {
    df.push_back(delta(f, m));
    dg.push_back(delta(g, m));
  }
  const double mu = mean(f);
  const double scale = max_abs(f);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    double acc = mu;
    for (const auto& d : df) acc += d[j];
    out.equal(kHaarReconstruction, acc, f[j], scale);
  }
  out.count(kHaarReconstruction);
  for (int m = 0; m < level; ++m) {
    for (int k = 0; k < level; ++k) {
      if (m == k) continue;
      const double norms = std::sqrt(inner(df[static_cast<std::size_t>(m)], df[static_cast<std::size_t>(m)]) *
                                     inner(dg[static_cast<std::size_t>(k)], dg[static_cast<std::size_t>(k)]));
      out.equal(kHaarOrthogonality, inner(df[static_cast<std::size_t>(m)], dg[static_cast<std::size_t>(k)]),
                0.0, norms);
    }
  }
  out.count(kHaarOrthogonality);
}

void tree_checks(Partial& out, std::uint64_t seed, const ScaleFamily& f, const ScaleFamily& g) {
  const GridSpec& grid = f.grid();
  std::mt19937_64 rng(seed);
  const double density = std::uniform_real_distribution<double>(0.05, 0.8)(rng);
  const StoppingTime times = random_stopping_time(rng(), grid, 0, grid.level(), density);

  const DyadicSignal fs = family_sum(f);
  const TreeSet trees = trees_from_stopping_time(times);
  double energy = 0.0;
  for (const Tree& tree : trees.trees) {
    const DyadicSignal p = tree_project(fs, tree);
    energy += inner(p, p);
  }
  const DyadicSignal centred = fs - DyadicSignal::constant(grid, mean(fs));
  const double total = inner(centred, centred);
  out.equal(kTreeOrthogonality, energy, total, total);
  out.count(kTreeOrthogonality);

  double magnitude = 0.0;
  for (std::size_t x = 0; x < grid.size(); ++x) {
    const auto fv = sample_values(f, x);
    const auto gv = sample_values(g, x);
    magnitude = std::max(magnitude, abs_sum(fv, 0, f.scale_count()) * abs_sum(gv, 0, g.scale_count()));
  }
  out.equal(kTreeIdentity, stopping_block_identity(times, f, g), 0.0, magnitude);
  out.count(kTreeIdentity);
}

void paraproduct_checks(Partial& out, const ScaleFamily& f, const ScaleFamily& g) {
  const GridSpec& grid = f.grid();
  const DyadicSignal p = paraproduct(family_sum(f), family_sum(g), DiscreteSource{});
  const double scale = max_abs(p) + 1.0;
  std::vector<double> running(grid.size(), 0.0);
  for (int m = 1; m <= grid.level(); ++m) {
    const DyadicSignal lhs = delta(p, m);
    const DyadicSignal& gm = g.component(m);
    double magnitude = scale;
    for (std::size_t x = 0; x < grid.size(); ++x) magnitude = std::max(magnitude, std::abs(running[x] * gm[x]));
    for (std::size_t x = 0; x < grid.size(); ++x) out.equal(kParaproductTelescoping, lhs[x], running[x] * gm[x], magnitude);
    for (std::size_t x = 0; x < grid.size(); ++x) running[x] += f.component(m)[x];
  }
  out.count(kParaproductTelescoping);
}

void blocksum_checks(Partial& out, std::uint64_t seed, const ScaleFamily& f, const ScaleFamily& g,
                     const ScaleFamily& h, bool inject) {
  const GridSpec& grid = f.grid();
  const int scales = f.scale_count();
  BlockSumOptions options;
  options.inject_prefix_sign_error = inject;
  const BlockSumTable table = BlockSumTable::build({f, g, h}, options);

  for (std::size_t x = 0; x < grid.size(); ++x) {
    const auto fv = sample_values(f, x);
    const auto gv = sample_values(g, x);
    const BlockValues product = table.product_values(x);
    for (int a = 0; a < scales; ++a) {
      for (int c = a + 1; c <= scales; ++c) {
        const double magnitude = abs_sum(fv, a, c) * abs_sum(gv, a, c);
        double unconstrained = 0.0;
        for (int i = a; i < c; ++i) {
          for (int j = a; j < c; ++j) unconstrained += fv[static_cast<std::size_t>(i)] * gv[static_cast<std::size_t>(j)];
        }
        out.equal(kUnconstrainedFactorization, product.get(a, c), unconstrained, magnitude);
        for (int b = a + 1; b < c; ++b) {
          const double pieces = direct_bilinear(fv, gv, a, b) + direct_bilinear(fv, gv, b, c) +
                                plain_sum(fv, a, b) * plain_sum(gv, b, c);
          out.equal(kBlocksumSplitting, table.bilinear(x, a, c), pieces, magnitude);
        }
      }
    }
  }
  out.count(kBlocksumSplitting);
  out.count(kUnconstrainedFactorization);

  // Chen on a handful of samples: brute force is O(scales^3) per window.
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, grid.size() - 1);
  for (int k = 0; k < 4; ++k) {
    const std::size_t x = pick(rng);
    const std::vector<std::vector<double>> values = {sample_values(f, x), sample_values(g, x),
                                                     sample_values(h, x)};
    for (int degree = 1; degree <= 3; ++degree) {
      const std::vector<std::vector<double>> factors(values.begin(), values.begin() + degree);
      for (int a = 0; a < scales; ++a) {
        for (int c = a + 1; c <= scales; ++c) {
          double magnitude = 1.0;
          for (const auto& v : factors) magnitude *= abs_sum(v, a, c);
          const double whole = iterated_bruteforce(factors, a, c);
          out.equal(kChenMultilinear, table.multilinear(x, a, c, degree), whole, magnitude);
          for (int b = a + 1; b < c; ++b) {
            double chen = 0.0;
            for (int m = 0; m <= degree; ++m) {
              const double left = m == 0 ? 1.0 : table.range_block(x, 0, m - 1, a, b);
              const double right = m == degree ? 1.0 : table.range_block(x, m, degree - 1, b, c);
              chen += left * right;
            }
            out.equal(kChenMultilinear, chen, whole, magnitude);
          }
        }
      }
    }
  }
  out.count(kChenMultilinear);
}

void bilinearity_checks(Partial& out, std::uint64_t seed, const ScaleFamily& f, const ScaleFamily& f2,
                        const ScaleFamily& g) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const double alpha = normal(rng);
  const double beta = normal(rng);
  std::vector<DyadicSignal> mixed;
  for (int c = 0; c < f.scale_count(); ++c) mixed.push_back(alpha * f.at(c) + beta * f2.at(c));
  const ScaleFamily combo = f.with_components(std::move(mixed));
  const BlockSumTable t1 = BlockSumTable::build(f, g, 2);
  const BlockSumTable t2 = BlockSumTable::build(f2, g, 2);
  const BlockSumTable tc = BlockSumTable::build(combo, g, 2);
  const BlockSumTable tr = BlockSumTable::build(g, combo, 2);
  const BlockSumTable tr1 = BlockSumTable::build(g, f, 2);
  const BlockSumTable tr2 = BlockSumTable::build(g, f2, 2);
  const int scales = f.scale_count();
  for (std::size_t x = 0; x < f.grid().size(); ++x) {
    const double magnitude = (std::abs(alpha) + std::abs(beta)) *
                             (abs_sum(sample_values(f, x), 0, scales) + abs_sum(sample_values(f2, x), 0, scales)) *
                             abs_sum(sample_values(g, x), 0, scales);
    out.equal(kBilinearity, tc.bilinear(x, 0, scales),
              alpha * t1.bilinear(x, 0, scales) + beta * t2.bilinear(x, 0, scales), magnitude);
    out.equal(kBilinearity, tr.bilinear(x, 0, scales),
              alpha * tr1.bilinear(x, 0, scales) + beta * tr2.bilinear(x, 0, scales), magnitude);
  }
  out.count(kBilinearity);
}

void variation_checks(Partial& out, const ScaleFamily& f, const ScaleFamily& g) {
  const BlockSumTable table = BlockSumTable::build(f, g, 2);
  const int scales = f.scale_count();
  constexpr std::array<double, 5> ts = {0.5, 0.75, 1.0, 2.0, 3.0};
  constexpr std::array<std::pair<double, double>, 5> holder = {
      std::pair{1.0, 1.0}, std::pair{1.0, 2.0}, std::pair{2.0, 2.0}, std::pair{1.5, 1.5}, std::pair{2.0, 3.0}};
  for (std::size_t x = 0; x < f.grid().size(); ++x) {
    const auto fv = sample_values(f, x);
    const auto gv = sample_values(g, x);
    const BlockValues bilinear = table.bilinear_values(x);
    const BlockValues linear = table.linear_values(x, 0);
    const BlockValues linear_g = table.linear_values(x, 1);

    out.dominated(kEndpointChain, variation_value(bilinear, 0.5),
                  abs_sum(fv, 0, scales) * abs_sum(gv, 0, scales));

    for (const BlockValues* values : {&bilinear, &linear}) {
      std::array<double, ts.size()> v{};
      for (std::size_t k = 0; k < ts.size(); ++k) v[k] = variation_value(*values, ts[k]);
      for (std::size_t k = 1; k < ts.size(); ++k) out.dominated(kMonotoneT, v[k], v[k - 1]);
      for (int e = -3; e <= 4; ++e) {
        const double lambda = std::ldexp(1.0, e);
        const JumpWitness jumps = jump_count(*values, lambda);
        for (std::size_t k = 0; k < ts.size(); ++k) {
          const double weak = weak_functional(jumps, ts[k]);
          out.dominated(kChebyshev, weak, v[k]);
          out.dominated(kRhoDomination, weak, rho_truncated(*values, lambda, ts[k]));
        }
      }
    }

    const BlockValues product = table.product_values(x);
    for (const auto& [r, s] : holder) {
      const double t = r * s / (r + s);
      out.dominated(kHolderUnconstrained, variation_value(product, t),
                    variation_value(linear, r) * variation_value(linear_g, s));
    }
  }
  out.count(kEndpointChain);
  out.count(kMonotoneT);
  out.count(kChebyshev);
  out.count(kRhoDomination);
  out.count(kHolderUnconstrained);
}

void stopping_checks(Partial& out, std::uint64_t seed, const ScaleFamily& f, const ScaleFamily& g) {
  std::mt19937_64 rng(seed);
  const BlockSumTable table = BlockSumTable::build(f, g, 2);
  double peak = 0.0;
  for (std::size_t x = 0; x < table.samples(); ++x) {
    peak = std::max(peak, std::abs(table.bilinear(x, 0, table.scale_count())));
  }
  const double lambda = std::max(peak, 1e-3) * std::uniform_real_distribution<double>(0.05, 1.0)(rng);
  const AdaptedStoppingTime adapted = build_adapted(f, g, lambda);
  out.flag(kAdaptedStoppingTime, !is_stopping_time(adapted.times));
  out.count(kAdaptedStoppingTime);
  const StoppingTime arbitrary =
      random_sequences(rng(), f.grid(), f.i_min() - 1, f.i_max(), std::uniform_real_distribution<double>(0.1, 0.9)(rng));
  const SqueezeReport report = verify_squeeze(arbitrary, table, adapted, lambda);
  out.flag(kSqueeze, !report.ok());
  out.count(kSqueeze);
}

void cz_checks(Partial& out, std::uint64_t seed, const ScaleFamily& family) {
  std::mt19937_64 rng(seed);
  constexpr std::array<double, 3> rs = {1.0, 1.5, 2.0};
  const double r = rs[rng() % rs.size()];
  const DyadicSignal h = height(family, r);
  const double lo = mean(h);
  const double hi = max_abs(h);
  if (hi <= 0.0) return;
  const double lambda = lo + std::uniform_real_distribution<double>(0.05, 0.95)(rng) * (hi - lo);
  const WindowPolicy windows = (rng() & 1) ? WindowPolicy::AllAligned : WindowPolicy::Dyadic;
  const CZDecomposition cz = cz_decompose(family, lambda, r, windows);
  const GridSpec& grid = family.grid();
  for (int c = 0; c < family.scale_count(); ++c) {
    const double scale = max_abs(family.at(c));
    for (std::size_t x = 0; x < grid.size(); ++x) {
      double acc = cz.good.at(c)[x];
      for (const auto& bad : cz.bad) acc += bad.at(c)[x];
      out.equal(kCZReconstruction, acc, family.at(c)[x], scale);
    }
    for (std::size_t k = 0; k < cz.intervals.size(); ++k) {
      const auto values = cz.bad[k].at(c).values();
      const std::size_t first = cz.intervals[k].first_sample(grid);
      const std::size_t count = cz.intervals[k].sample_count(grid);
      out.equal(kCZMeanZero, pairwise_sum(values.subspan(first, count)) / static_cast<double>(count), 0.0,
                scale);
    }
  }
  const DyadicSignal good_height = height(cz.good, r);
  for (std::size_t x = 0; x < grid.size(); ++x) out.dominated(kCZHeight, good_height[x], 2.0 * lambda);
  out.count(kCZReconstruction);
  out.count(kCZMeanZero);
  out.count(kCZHeight);
}

void spectral_checks(Partial& out, std::uint64_t seed, const GridSpec& grid) {
  std::mt19937_64 rng(seed);
  const ScaleFamily data = gen_raw(rng(), grid, 1, grid.level(), {});
  const BandProfile profile = make_profile(ProfileKind::Bandpass, 1 + static_cast<int>(rng() % 2));
  const int scale = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(grid.level() - 1));
  const DyadicInterval interval{scale, rng() % (std::size_t{1} << scale)};
  const LocalSplit split = local_split(data, profile, interval);
  for (int c = 0; c < data.scale_count(); ++c) {
    const double magnitude = max_abs(split.convolved.at(c)) + max_abs(data.at(c));
    const double tilde = split.tilde.values[static_cast<std::size_t>(c)];
    for (std::size_t x = 0; x < grid.size(); ++x) {
      out.equal(kLocalSplit, split.h1.at(c)[x] + split.h2.at(c)[x] + split.h3.at(c)[x],
                split.convolved.at(c)[x] - tilde, magnitude);
    }
  }
  out.count(kLocalSplit);

  const DyadicSignal f = gen_signal(rng(), grid, {});
  const int i = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(grid.level()));
  const DyadicSignal once = convolve_scale(f, profile, i);
  const DyadicSignal twice = convolve_scale(once, profile, i);
  const Spectrum s1 = forward_transform(once);
  const Spectrum s2 = forward_transform(twice);
  double peak = 0.0;
  for (const auto& c : s1.half()) peak = std::max(peak, std::abs(c));
  for (int k = 0; k <= s1.nyquist(); ++k) {
    if (profile.multiplier(k, i) != 1.0) continue;
    out.equal(kMultiplierComposition, std::abs(s2.half()[static_cast<std::size_t>(k)] - s1.half()[static_cast<std::size_t>(k)]),
              0.0, peak);
  }
  out.count(kMultiplierComposition);

  const BandProfile partition = make_profile(ProfileKind::Partition, 1);
  std::vector<double> acc(grid.size(), 0.0);
  for (int s = 0; s <= grid.level(); ++s) {
    const DyadicSignal part = convolve_scale(f, partition, s);
    for (std::size_t x = 0; x < grid.size(); ++x) acc[x] += part[x];
  }
  const double mu = mean(f);
  const double magnitude = max_abs(f);
  for (std::size_t x = 0; x < grid.size(); ++x) out.equal(kPartitionOfUnity, acc[x], f[x] - mu, magnitude);
  out.count(kPartitionOfUnity);
}

}  // namespace

bool IdentityReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.passed(); });
}

const IdentityCheck& IdentityReport::check(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("no identity check named " + std::string(name));
}

IdentityReport run_identities(const IdentityOptions& options) {
  if (options.min_level < 1 || options.max_level < options.min_level) {
    throw std::invalid_argument("bad identity level range");
  }
  std::vector<Partial> partials(options.trials);
  parallel_for(options.trials, [&](std::size_t k) {
    const std::uint64_t seed = mix_seed(options.seed, k);
    std::mt19937_64 rng(seed);
    const int span = options.max_level - options.min_level + 1;
    const GridSpec grid(options.min_level + static_cast<int>(rng() % static_cast<std::uint64_t>(span)));
    GeneratorSpec spec;
    spec.distribution = kDistributions[k % kDistributions.size()];
    const int level = grid.level();
    const ScaleFamily f = gen_discrete(rng(), grid, 1, level, spec);
    const ScaleFamily g = gen_discrete(rng(), grid, 1, level, spec);
    const ScaleFamily h = gen_discrete(rng(), grid, 1, level, {});
    const ScaleFamily f2 = gen_discrete(rng(), grid, 1, level, {});

    Partial& out = partials[k];
    haar_checks(out, family_sum(f) + DyadicSignal::constant(grid, 0.5), family_sum(g));
    tree_checks(out, rng(), f, g);
    paraproduct_checks(out, f, g);
    blocksum_checks(out, rng(), f, g, h, options.inject_prefix_sign_error);
    bilinearity_checks(out, rng(), f, f2, g);
    variation_checks(out, f, g);
    stopping_checks(out, rng(), f, g);
    cz_checks(out, rng(), (k % 2) ? f : gen_raw(rng(), grid, 1, level, spec));
    if (level >= 2) spectral_checks(out, rng(), grid);
  });

  IdentityReport report;
  for (std::size_t c = 0; c < kCheckCount; ++c) {
    IdentityCheck check{kCheckNames[c], 0, 0.0, kIdentityThreshold};
    for (const auto& partial : partials) {
      check.instances += partial.instances[c];
      check.max_deviation = std::max(check.max_deviation, partial.deviation[c]);
    }
    report.checks.push_back(check);
  }
  return report;
}

void print_identities(std::ostream& out, const IdentityReport& report) {
  for (const auto& check : report.checks) {
    out << (check.passed() ? "PASS " : "FAIL ") << std::left << std::setw(30) << check.name
        << " instances=" << check.instances << " max_dev=" << format_number(check.max_deviation)
        << '\n';
  }
}

}  // namespace paravar
