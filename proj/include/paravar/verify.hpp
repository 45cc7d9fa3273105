#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "paravar/family.hpp"
#include "paravar/grid.hpp"
#include "paravar/haar.hpp"
#include "paravar/spectral.hpp"
#include "paravar/stopping.hpp"

namespace paravar {

enum class Distribution {
  Gaussian,    ///< i.i.d. N(0,1) Haar coefficients
  Rademacher,  ///< i.i.d. +-1
  Sparse,      ///< `atoms` random intervals carry N(0,1), the rest are 0
  Lacunary,    ///< (-1)^i |N(0,1)| at scale i: coherent signs across scales
};

const char* to_string(Distribution distribution);
Distribution distribution_from_string(std::string_view name);

struct GeneratorSpec {
  Distribution distribution = Distribution::Gaussian;
  double amplitude = 1.0;
  int atoms = 4;
};

/// SplitMix64 of (seed, stream); used to derive independent trial seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Mean-zero Haar coefficients, nonzero only at scales l = i - 1 for i in range.
HaarCoefficients gen_coefficients(std::uint64_t seed, GridSpec grid, int i_min, int i_max,
                                  const GeneratorSpec& spec);
ScaleFamily gen_discrete(std::uint64_t seed, GridSpec grid, int i_min, int i_max,
                         const GeneratorSpec& spec);
/// Signal whose Haar coefficients follow `spec` at every scale 1..L.
DyadicSignal gen_signal(std::uint64_t seed, GridSpec grid, const GeneratorSpec& spec);
/// make_continuous_family of gen_signal.
ScaleFamily gen_continuous(std::uint64_t seed, GridSpec grid, int i_min, int i_max,
                           const BandProfile& profile, const GeneratorSpec& spec);
/// Arbitrary per-scale data: the components of gen_discrete relabelled Raw.
ScaleFamily gen_raw(std::uint64_t seed, GridSpec grid, int i_min, int i_max,
                    const GeneratorSpec& spec);

/// Stopping time whose tops are a random set of dyadic intervals at scales
/// in (lo, hi), plus every interval at scales lo and hi.
StoppingTime random_stopping_time(std::uint64_t seed, GridSpec grid, int lo, int hi,
                                  double density = 0.3);
/// Per-sample increasing sequences from lo to hi with random interior points;
/// not a stopping time in general.
StoppingTime random_sequences(std::uint64_t seed, GridSpec grid, int lo, int hi,
                              double density = 0.3);

/// Runs fn(0..count-1) on worker threads; callers store results by index so
/// the outcome does not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

struct IdentityCheck {
  std::string name;
  std::size_t instances = 0;
  double max_deviation = 0.0;
  double threshold = 0.0;
  bool passed() const { return max_deviation <= threshold; }
};

struct IdentityReport {
  std::vector<IdentityCheck> checks;
  bool ok() const;
  const IdentityCheck& check(std::string_view name) const;
};

inline constexpr double kIdentityThreshold = 1e-9;

struct IdentityOptions {
  std::uint64_t seed = 0;
  std::size_t trials = 200;
  int min_level = 4;
  int max_level = 8;
  /// Mutation self-test: builds block tables with a sign error in the
  /// bilinear prefix, which the splitting check must catch.
  bool inject_prefix_sign_error = false;
};

/// Every exact identity and domination of the library on random instances.
/// Deviations are relative: |lhs - rhs| / (1 + magnitude), and for
/// dominations max(0, lhs - rhs) / (1 + |rhs|).
IdentityReport run_identities(const IdentityOptions& options);

void print_identities(std::ostream& out, const IdentityReport& report);

struct StoppingSuiteReport {
  std::size_t trials = 0;
  std::size_t not_stopping_times = 0;
  std::size_t squeeze_windows = 0;
  std::size_t squeeze_violations = 0;
  std::size_t minimality_failures = 0;
  std::size_t accounting_failures = 0;
  bool ok() const {
    return trials > 0 && not_stopping_times == 0 && squeeze_violations == 0 &&
           minimality_failures == 0 && accounting_failures == 0;
  }
};

StoppingSuiteReport run_stopping_suite(std::uint64_t seed, std::size_t trials = 1000,
                                       int min_level = 3, int max_level = 7);

struct CZSuiteReport {
  std::size_t trials = 0;
  double max_reconstruction = 0.0;
  double max_mean = 0.0;
  /// max over samples of height(good) / (2 lambda); must be <= 1.
  double max_height_ratio = 0.0;
  /// max of |E| lambda / (C_M ||f||_{1,r}); must be <= 1.
  double max_exceptional_ratio = 0.0;
  /// max of ||g||_{r,r}^r / ((2 lambda)^(r-1) ||f||_{1,r}); must be <= 1.
  double max_good_norm_ratio = 0.0;
  std::size_t selected_intervals = 0;
  bool ok() const;
};

CZSuiteReport run_cz_suite(std::uint64_t seed, std::size_t trials = 300, int min_level = 4,
                           int max_level = 9);

struct SpectralSuiteReport {
  std::size_t families = 0;
  std::size_t bandwidth_failures = 0;
  double max_out_of_band = 0.0;
  std::size_t signals = 0;
  /// max of |phi_i * f| / (C_phi M f) over samples, scales and signals.
  double max_fefferman_stein_ratio = 0.0;
  std::size_t fefferman_stein_violations = 0;
  /// S c / |c| for constant signals c; vanishes up to rounding.
  double max_constant_jsw = 0.0;
  bool ok() const {
    return families > 0 && signals > 0 && bandwidth_failures == 0 &&
           fefferman_stein_violations == 0 && max_constant_jsw <= 1e-12;
  }
};

SpectralSuiteReport run_spectral_suite(std::uint64_t seed, std::size_t families = 100,
                                       std::size_t signals = 200, int min_level = 5,
                                       int max_level = 9);

struct ExperimentConfig {
  /// strong | weak | bistrong | biweak | nonband-strong | nonband-weak |
  /// maxpara | prop1 | multilinear | diag-weak | bootstrap (t is t0)
  std::string id;
  ExponentSet exponents;
  int grid_level = 8;
  Flavor flavor = Flavor::Discrete;
  GeneratorSpec generator;
  std::size_t trials = 200;
  std::uint64_t seed = 0;
  /// Weak ids only; empty selects lambda_grid().
  std::vector<double> lambdas;
  WindowPolicy windows = WindowPolicy::Dyadic;
  int degree = 3;
  int bandwidth = 1;
};

bool is_weak_id(std::string_view id);
/// Throws std::invalid_argument for unknown ids or exponents outside the
/// statement's range.
void validate_config(const ExperimentConfig& config);

struct ReportRow {
  std::string inequality_id;
  ExponentSet exponents;
  std::optional<double> lambda;  // per-lambda weak rows
  bool lambda_sup = false;       // the sup-over-lambda weak row
  int grid_level = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
  std::size_t skipped = 0;
  double runtime_ms = 0.0;
  std::string generator;
};

/// LHS/RHS over `trials` seeded instances. Weak ids give one row per lambda
/// and a final sup row.
std::vector<ReportRow> estimate_constant(const ExperimentConfig& config, bool timing = false);

/// Evaluates several configs sharing (id, level, flavor, generator, trials,
/// seed) on the same trial data.
std::vector<ReportRow> estimate_constants(const std::vector<ExperimentConfig>& configs,
                                          bool timing = false);

/// (p,q) x (r,s) x t panel restricted to each id's admissible exponents.
std::vector<ExperimentConfig> default_panel(const std::vector<std::string>& ids, int grid_level,
                                            std::size_t trials, std::uint64_t seed,
                                            const GeneratorSpec& generator);

struct StabilityEntry {
  std::string key;
  double coarse = 0.0;
  double fine = 0.0;
  bool ok() const { return fine <= 1.2 * coarse || fine == 0.0; }
};

/// Matches rows by config (using the sup row for weak ids) and compares the
/// max ratio at `fine_level` with 1.2 x the one at `coarse_level`.
std::vector<StabilityEntry> compare_levels(const std::vector<ReportRow>& rows, int coarse_level,
                                           int fine_level);

inline constexpr std::string_view kReportHeader =
    "inequality_id,p,q,r,s,t,lambda,grid_level,trials,seed,max_ratio,mean_ratio,skipped,runtime_ms";

void write_csv(std::ostream& out, const std::vector<ReportRow>& rows);
/// Shortest round-trip decimal.
std::string format_number(double value);

struct BootstrapReport {
  std::size_t samples = 0;
  std::size_t violations = 0;
  double max_ratio = 0.0;  // lhs / rhs where rhs > 0
  bool ok() const { return violations == 0; }
};

/// Per sample: max_N sum_k |S|^t0 <= 2^t0 sum_n 2^(n t0) J(2^n), J the bilinear
/// jump count. Requires t0 > t.
BootstrapReport bootstrap_check(const ScaleFamily& f, const ScaleFamily& g, double t, double t0);

struct JswReport {
  std::size_t samples = 0;
  std::size_t violations = 0;
  double max_jump_ratio = 0.0;    // lambda J(D) / sum_j |d_j|
  double max_square_ratio = 0.0;  // sum_j |d_j| / (Sf (sum |Delta_j g|^2)^(1/2))
  double difference_norm = 0.0;   // || sum_j |d_j| ||_1
  double square_function_norm = 0.0;  // || S f ||_2
  bool ok() const { return violations == 0; }
};

/// d_j = (E_{j-1} f - phi_{j-1} * f) Delta_j g, j = 1..L; checks
/// lambda J_lambda(D) <= sum_j |d_j| <= S f (sum_j |Delta_j g|^2)^(1/2).
JswReport jsw_comparison(const DyadicSignal& f, const DyadicSignal& g, const BandProfile& lowpass,
                         double lambda);

}  // namespace paravar
