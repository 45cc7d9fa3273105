#include <doctest.h>

#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "paravar/haar.hpp"
#include "paravar/spectral.hpp"
#include "paravar/stopping.hpp"
#include "paravar/verify.hpp"
#include "support.hpp"

using namespace paravar;

namespace {

ExperimentConfig config(std::string id, ExponentSet e, int level = 4, std::size_t trials = 5) {
  ExperimentConfig c;
  c.id = std::move(id);
  c.exponents = e;
  c.grid_level = level;
  c.trials = trials;
  c.seed = 3;
  return c;
}

}  // namespace

TEST_CASE("generators") {
  const GridSpec grid(6);
  const GeneratorSpec gauss;
  CHECK(gen_discrete(9, grid, 1, 6, gauss) == gen_discrete(9, grid, 1, 6, gauss));
  CHECK_FALSE(gen_discrete(9, grid, 1, 6, gauss) == gen_discrete(10, grid, 1, 6, gauss));
  CHECK(gen_signal(4, grid, gauss) == gen_signal(4, grid, gauss));
  CHECK(mix_seed(1, 2) == mix_seed(1, 2));
  CHECK(mix_seed(1, 2) != mix_seed(1, 3));
  CHECK(mix_seed(1, 2) != mix_seed(2, 2));

  const HaarCoefficients sparse = gen_coefficients(5, grid, 1, 6, {Distribution::Sparse, 1.0, 1});
  int nonzero = 0;
  for (const auto& level : sparse.detail) {
    for (double v : level) nonzero += v != 0.0;
  }
  CHECK(nonzero == 1);
  CHECK(sparse.mean == 0.0);

  const HaarCoefficients rad = gen_coefficients(5, grid, 2, 4, {Distribution::Rademacher, 1.0, 4});
  for (std::size_t l = 0; l < rad.detail.size(); ++l) {
    const bool in_range = l >= 1 && l <= 3;
    for (double v : rad.detail[l]) CHECK(std::abs(v) == (in_range ? 1.0 : 0.0));
  }

  const HaarCoefficients lac = gen_coefficients(6, grid, 1, 6, {Distribution::Lacunary, 1.0, 4});
  for (std::size_t l = 0; l < lac.detail.size(); ++l) {
    // scale i = l + 1 carries sign (-1)^i
    for (double v : lac.detail[l]) CHECK(v * ((l + 1) % 2 ? -1.0 : 1.0) >= 0.0);
  }

  const ScaleFamily silent = gen_discrete(5, grid, 1, 6, {Distribution::Gaussian, 0.0, 4});
  for (const auto& c : silent.components()) CHECK(lp_norm(c, INFINITY) == 0.0);

  const ScaleFamily disc = gen_discrete(8, grid, 2, 5, gauss);
  CHECK(disc.flavor() == Flavor::Discrete);
  CHECK(discrete_projection_error(disc) <= 1e-12);
  const ScaleFamily raw = gen_raw(8, grid, 2, 5, gauss);
  CHECK(raw.flavor() == Flavor::Raw);
  CHECK(raw.components() == disc.components());

  const ScaleFamily cont = gen_continuous(8, grid, 1, 4, make_profile(ProfileKind::Bandpass, 1), gauss);
  CHECK(cont.flavor() == Flavor::Continuous);
  CHECK(bandwidth_check(cont).ok);

  CHECK(distribution_from_string(to_string(Distribution::Lacunary)) == Distribution::Lacunary);
  CHECK_THROWS(distribution_from_string("cauchy"));
}

TEST_CASE("random stopping structures") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const GridSpec grid(5);
    const StoppingTime s = random_stopping_time(seed, grid, 1, 5);
    CHECK(is_stopping_time(s));
    for (const auto& seq : s.sequences) {
      CHECK(seq.front() == 1);
      CHECK(seq.back() == 5);
    }
    const StoppingTime r = random_sequences(seed, grid, 0, 5);
    for (const auto& seq : r.sequences) {
      CHECK(seq.front() == 0);
      CHECK(seq.back() == 5);
      for (std::size_t k = 1; k < seq.size(); ++k) CHECK(seq[k - 1] < seq[k]);
    }
  }
}

TEST_CASE("parallel_for visits every index once") {
  std::vector<std::atomic<int>> hits(257);
  parallel_for(hits.size(), [&](std::size_t k) { hits[k].fetch_add(1); });
  for (const auto& h : hits) CHECK(h.load() == 1);
}

TEST_CASE("identity suite and its mutation self-test") {
  IdentityOptions opts;
  opts.seed = 11;
  opts.trials = 20;
  const IdentityReport good = run_identities(opts);
  CHECK(good.ok());
  CHECK(good.checks.size() == 22);
  for (const auto& c : good.checks) CHECK_MESSAGE(c.instances > 0, c.name);

  opts.inject_prefix_sign_error = true;
  const IdentityReport bad = run_identities(opts);
  CHECK_FALSE(bad.ok());
  CHECK_FALSE(bad.check("blocksum_splitting").passed());

  std::ostringstream out;
  print_identities(out, good);
  CHECK(out.str().find("PASS blocksum_splitting") != std::string::npos);
  CHECK_THROWS(good.check("no_such_check"));
}

TEST_CASE("small suites") {
  CHECK(run_stopping_suite(1, 50).ok());
  CHECK(run_cz_suite(1, 20).ok());
  CHECK(run_spectral_suite(1, 10, 10).ok());
}

TEST_CASE("validate_config") {
  CHECK_NOTHROW(validate_config(config("bistrong", {2, 2, 2, 2, 1.5})));
  CHECK_THROWS(validate_config(config("bistrong", {2, 2, 2, 2, 1})));
  CHECK_NOTHROW(validate_config(config("biweak", {2, 2, 2, 2, 1})));
  CHECK_THROWS(validate_config(config("bistrong", {2, 2, 2, 2, 0.9})));
  CHECK_THROWS(validate_config(config("bistrong", {2, 2, 1, 2, 2.0 / 3.0})));
  CHECK_NOTHROW(validate_config(config("bistrong", {2, 2, 1, 1, 0.5})));
  CHECK_NOTHROW(validate_config(config("strong", {2, 2, 1.5, 2, 1.5})));
  CHECK_THROWS(validate_config(config("strong", {2, 2, 2, 2, 2})));
  CHECK_NOTHROW(validate_config(config("weak", {2, 2, 2, 2, 2})));
  CHECK_THROWS(validate_config(config("strong", {1, 2, 1, 2, 2})));
  CHECK_THROWS(validate_config(config("strong", {2, 2, 3, 2, 3})));
  CHECK_THROWS(validate_config(config("nosuch", {2, 2, 2, 2, 1})));
  CHECK_THROWS(validate_config(config("strong", {2, 2, 1, 2, 1}, 2)));
  CHECK_THROWS(validate_config(config("strong", {2, 2, 1, 2, 1}, 4, 0)));
  CHECK_NOTHROW(validate_config(config("diag-weak", {2, 2, 2, 2, 1})));
  CHECK_THROWS(validate_config(config("diag-weak", {3, 2, 2, 2, 1})));
  CHECK_THROWS(validate_config(config("multilinear", {2, 2, 2, 2, 2.0 / 3.0})));
  CHECK_NOTHROW(validate_config(config("bootstrap", {2, 2, 2, 2, 1.5})));
  CHECK_THROWS(validate_config(config("bootstrap", {2, 2, 2, 2, 1.0})));
  CHECK(is_weak_id("biweak"));
  CHECK(is_weak_id("nonband-weak"));
  CHECK_FALSE(is_weak_id("bistrong"));
}

TEST_CASE("estimate_constant") {
  // t = r = 1: the singleton tiling is optimal, so V^1 is the l^1 height and the ratio is 1.
  const auto ones = estimate_constant(config("strong", {2, 2, 1, 2, 1}, 5, 4));
  REQUIRE(ones.size() == 1);
  CHECK(ones[0].max_ratio == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ones[0].mean_ratio == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ones[0].runtime_ms == 0.0);
  CHECK(ones[0].skipped == 0);

  ExperimentConfig weak = config("biweak", {2, 2, 2, 2, 1.5}, 4, 3);
  weak.lambdas = {0.25, 1.0};
  const auto rows = estimate_constant(weak);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].lambda == 0.25);
  CHECK(rows[1].lambda == 1.0);
  CHECK(rows[2].lambda_sup);
  CHECK(rows[2].max_ratio == std::max(rows[0].max_ratio, rows[1].max_ratio));

  // Chebyshev: every weak row sits below the matching strong constant instance by instance.
  const auto strong = estimate_constant(config("bistrong", {2, 2, 2, 2, 1.5}, 4, 3));
  CHECK(rows[2].max_ratio <= strong[0].max_ratio * (1 + 1e-12));

  // Shared-data batch agrees with one-at-a-time evaluation.
  const auto batch = estimate_constants({config("bistrong", {2, 2, 2, 2, 1.5}, 4, 3), config("bistrong", {2, 2, 2, 2, 2}, 4, 3)});
  REQUIRE(batch.size() == 2);
  CHECK(batch[0].max_ratio == strong[0].max_ratio);

  for (const char* id : {"maxpara", "prop1", "nonband-strong", "multilinear"}) {
    ExponentSet e{2, 2, 1, 2, 2};
    if (std::string(id) == "prop1") e = {2, 2, 1, 2, 2.0 / 3.0};
    const auto r = estimate_constant(config(id, e, 4, 2));
    REQUIRE_FALSE(r.empty());
    CHECK(std::isfinite(r[0].max_ratio));
    CHECK(r[0].max_ratio > 0.0);
  }
}

TEST_CASE("default_panel and compare_levels") {
  const auto panel = default_panel({"bistrong", "biweak", "bootstrap"}, 6, 10, 1, GeneratorSpec{});
  CHECK_FALSE(panel.empty());
  for (const auto& c : panel) CHECK_NOTHROW(validate_config(c));
  std::size_t boots = 0;
  for (const auto& c : panel) boots += c.id == "bootstrap";
  CHECK(boots == 3);

  ReportRow a;
  a.inequality_id = "bistrong";
  a.grid_level = 8;
  a.max_ratio = 1.0;
  ReportRow b = a;
  b.grid_level = 12;
  b.max_ratio = 1.19;
  ReportRow c = a;
  c.exponents.t = 2;
  c.max_ratio = 1.0;
  ReportRow d = c;
  d.grid_level = 12;
  d.max_ratio = 1.3;
  ReportRow lam = a;
  lam.lambda = 0.5;
  lam.max_ratio = 100.0;
  const auto entries = compare_levels({a, b, c, d, lam}, 8, 12);
  REQUIRE(entries.size() == 2);
  int failing = 0;
  for (const auto& e : entries) failing += !e.ok();
  CHECK(failing == 1);
}

TEST_CASE("csv") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(NAN) == "nan");
  CHECK(format_number(INFINITY) == "inf");

  ReportRow row;
  row.inequality_id = "biweak";
  row.lambda_sup = true;
  row.grid_level = 8;
  row.trials = 2;
  row.seed = 7;
  row.max_ratio = 0.5;
  row.mean_ratio = 0.25;
  std::ostringstream out;
  write_csv(out, {row});
  CHECK(out.str() == std::string(kReportHeader) + "\nbiweak,2,2,2,2,1,sup,8,2,7,0.5,0.25,0,0\n");
}

TEST_CASE("bootstrap_check") {
  const ScaleFamily zero = test::constant_family(3, 1, {0, 0, 0}, Flavor::Discrete);
  const BootstrapReport z = bootstrap_check(zero, zero, 1.0, 1.5);
  CHECK(z.ok());
  CHECK(z.max_ratio == 0.0);
  CHECK_THROWS(bootstrap_check(zero, zero, 1.0, 1.0));

  // One scale pair equal to 3: a single jump at every level below 3.
  const ScaleFamily f = test::constant_family(2, 1, {1.0, 0.0});
  const ScaleFamily g = test::constant_family(2, 1, {0.0, 3.0});
  const BootstrapReport one = bootstrap_check(f, g, 1.0, 2.0);
  CHECK(one.samples == 4);
  CHECK(one.ok());
  CHECK(one.max_ratio > 0.0);
  CHECK(one.max_ratio <= 1.0);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const GridSpec grid(6);
    const auto a = gen_discrete(seed, grid, 1, 6, {});
    const auto b = gen_discrete(seed + 100, grid, 1, 6, {});
    CHECK(bootstrap_check(a, b, 1.0, 1.5).ok());
  }
}

TEST_CASE("jsw_comparison") {
  const BandProfile low = make_profile(ProfileKind::Lowpass, 1);
  std::mt19937_64 rng(70);
  const DyadicSignal f = test::random_signal(rng, 6);
  const JswReport flat = jsw_comparison(f, DyadicSignal::constant(GridSpec(6), 2.0), low, 0.5);
  CHECK(flat.ok());
  CHECK(flat.difference_norm == 0.0);

  for (int k = 0; k < 10; ++k) {
    const DyadicSignal a = test::random_signal(rng, 6);
    const DyadicSignal b = test::random_signal(rng, 6);
    for (double lambda : {0.1, 1.0}) {
      const JswReport r = jsw_comparison(a, b, low, lambda);
      CHECK(r.ok());
      CHECK(r.max_jump_ratio <= 1.0 + 1e-12);
      CHECK(r.max_square_ratio <= 1.0 + 1e-12);
      CHECK(r.square_function_norm > 0.0);
    }
  }
}
