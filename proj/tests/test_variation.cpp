#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "paravar/blocksum.hpp"
#include "paravar/variation.hpp"
#include "support.hpp"

using namespace paravar;

namespace {

// Every tiling 0 = N_0 < ... < N_K = n, as a bitmask of interior breakpoints.
double naive_variation(const BlockValues& A, double t) {
  const int n = A.scale_count();
  if (n == 0) return 0.0;
  double best = 0.0;
  for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
    double sum = 0.0;
    int prev = 0;
    for (int c = 1; c <= n; ++c) {
      if (c == n || (mask >> (c - 1) & 1u)) {
        sum += std::pow(std::abs(A(prev, c)), t);
        prev = c;
      }
    }
    best = std::max(best, sum);
  }
  return std::pow(best, 1.0 / t);
}

// Every subset of {0..n} as breakpoints; consecutive pairs that exceed lambda count.
std::size_t naive_jumps(const BlockValues& A, double lambda) {
  const int n = A.scale_count();
  std::size_t best = 0;
  for (unsigned mask = 0; mask < (1u << (n + 1)); ++mask) {
    std::size_t count = 0;
    int prev = -1;
    for (int c = 0; c <= n; ++c) {
      if (!(mask >> c & 1u)) continue;
      if (prev >= 0 && std::abs(A(prev, c)) > lambda) ++count;
      prev = c;
    }
    best = std::max(best, count);
  }
  return best;
}

BlockValues random_bilinear(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> normal;
  std::vector<double> f(static_cast<std::size_t>(n)), g(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    f[static_cast<std::size_t>(k)] = normal(rng);
    g[static_cast<std::size_t>(k)] = normal(rng);
  }
  return BlockValues::from(n, [&](int a, int b) { return direct_bilinear(f, g, a, b); });
}

BlockValues random_linear(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> normal;
  std::vector<double> v(static_cast<std::size_t>(n));
  for (double& x : v) x = normal(rng);
  return BlockValues::linear(v);
}

}  // namespace

TEST_CASE("variation examples") {
  const BlockValues one = BlockValues::linear({1, 0, 0});
  for (double t : {0.5, 1.0, 2.0, 3.0}) {
    const VariationWitness w = variation_dp(one, t);
    CHECK(w.value == doctest::Approx(1.0));
    CHECK(evaluate_variation(one, w.breakpoints, t) == doctest::Approx(w.value));
  }
  const BlockValues pm = BlockValues::linear({1, -1});
  CHECK(variation_dp(pm, 1.0).value == 2.0);
  CHECK(variation_dp(pm, 2.0).value == doctest::Approx(std::sqrt(2.0)));
  CHECK(variation_bruteforce(pm, 2.0).value == doctest::Approx(std::sqrt(2.0)));
  CHECK(variation_dp(BlockValues(0), 1.0).value == 0.0);
  CHECK(variation_bruteforce(BlockValues(0), 1.0).value == 0.0);
  CHECK_THROWS(variation_bruteforce(BlockValues(kVariationBruteForceMaxScales + 1), 1.0));
}

TEST_CASE("jump examples") {
  CHECK(jump_count(BlockValues::linear({1, -1, 1, -1}), 0.9).count == 4);
  CHECK(jump_count(BlockValues::linear({3, 3, -10}), 5.0).count == 2);
  const JumpWitness skip = jump_count(BlockValues::linear({5.1, 5.1, -0.2, 5.1}), 5.0);
  CHECK(skip.count == 3);
  CHECK(skip.blocks.size() == 3);
  CHECK(jump_count_bruteforce(BlockValues::linear({5.1, 5.1, -0.2, 5.1}), 5.0).count == 3);
  CHECK(jump_count_bruteforce(BlockValues::linear({3, 3, -10}), 5.0).count == 2);
  CHECK(jump_count_bruteforce(BlockValues::linear({1, -1, 1, -1}), 0.9).count == 4);
  CHECK(jump_count(BlockValues::linear({0, 0, 0}), 0.1).count == 0);
  CHECK(jump_count_bruteforce(BlockValues::linear({0, 0, 0}), 0.1).count == 0);

  JumpWitness w;
  w.lambda = 2.0;
  CHECK(weak_functional(w, 1.0) == 0.0);
  w.count = 1;
  CHECK(weak_functional(w, 3.0) == 2.0);
  w.count = 4;
  CHECK(weak_functional(w, 2.0) == 4.0);
}

TEST_CASE("rho_truncated examples") {
  // Blocks below lambda: rho is the identity and the functional is a 2t-variation.
  const BlockValues small = BlockValues::linear({0.1, -0.2, 0.05});
  const double lambda = 10.0;
  CHECK(rho_truncated(small, lambda, 1.0) == doctest::Approx(std::pow(variation_value(small, 2.0), 2.0) / lambda));
  CHECK(rho_truncated(BlockValues::linear({3.0}), 3.0, 1.5) == doctest::Approx(3.0));
  CHECK_THROWS(rho_truncated(small, 1.0, 0.25));
}

TEST_CASE("oracle equivalence and pointwise inequalities") {
  std::mt19937_64 rng(40);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + trial % 12;
    const BlockValues A = trial % 2 ? random_bilinear(rng, n) : random_linear(rng, n);
    for (double t : {0.5, 1.0, 2.0, 3.5}) {
      const VariationWitness w = variation_dp(A, t);
      CHECK(w.value == doctest::Approx(naive_variation(A, t)).epsilon(1e-10));
      CHECK(w.value == doctest::Approx(variation_bruteforce(A, t).value).epsilon(1e-10));
      CHECK(variation_value(A, t) == doctest::Approx(w.value).epsilon(1e-12));
      CHECK(evaluate_variation(A, w.breakpoints, t) == doctest::Approx(w.value).epsilon(1e-10));
    }
    CHECK(variation_value(A, 1.0) * (1 + 1e-12) >= variation_value(A, 2.0));
    CHECK(variation_value(A, 2.0) * (1 + 1e-12) >= variation_value(A, 3.5));

    for (double lambda : {0.05, 0.3, 1.0, 2.5}) {
      const JumpWitness j = jump_count(A, lambda);
      CHECK(j.count == naive_jumps(A, lambda));
      CHECK(j.count == jump_count_bruteforce(A, lambda).count);
      CHECK(jump_count_greedy(A, lambda).count <= j.count);
      REQUIRE(j.blocks.size() == j.count);
      int prev_end = 0;
      for (auto [a, b] : j.blocks) {
        CHECK(a >= prev_end);
        CHECK(a < b);
        CHECK(std::abs(A(a, b)) > lambda);
        prev_end = b;
      }
      for (double t : {1.0, 2.0}) {
        CHECK(weak_functional(j, t) <= variation_value(A, t) * (1 + 1e-12));
        CHECK(rho_truncated(A, lambda, t) >= weak_functional(j, t) * (1 - 1e-12));
      }
    }
  }
}

TEST_CASE("rho quasi-subadditivity") {
  std::mt19937_64 rng(41);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + trial % 10;
    std::normal_distribution<double> normal;
    std::vector<double> f(static_cast<std::size_t>(n)), g(static_cast<std::size_t>(n)), h(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      f[static_cast<std::size_t>(k)] = normal(rng);
      g[static_cast<std::size_t>(k)] = normal(rng);
      h[static_cast<std::size_t>(k)] = f[static_cast<std::size_t>(k)] + g[static_cast<std::size_t>(k)];
    }
    const double lambda = std::exp2(std::uniform_real_distribution<double>(-3, 2)(rng));
    for (double t : {0.5, 1.0, 2.0}) {
      const double sum = rho_truncated(BlockValues::linear(f), lambda, t) + rho_truncated(BlockValues::linear(g), lambda, t);
      if (sum > 0) worst = std::max(worst, rho_truncated(BlockValues::linear(h), lambda, t) / sum);
    }
  }
  MESSAGE("empirical quasi-subadditivity constant " << worst);
  // rho(x + y) <= rho(x) + rho(y) and Minkowski in l^(2t) give C <= 2.
  CHECK(worst <= 2.0);
  CHECK(worst > 0.0);
}

TEST_CASE("Holder bound for the unconstrained product") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 9;
    std::normal_distribution<double> normal;
    std::vector<double> f(static_cast<std::size_t>(n)), g(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      f[static_cast<std::size_t>(k)] = normal(rng);
      g[static_cast<std::size_t>(k)] = normal(rng);
    }
    const BlockValues F = BlockValues::linear(f);
    const BlockValues G = BlockValues::linear(g);
    const BlockValues P = BlockValues::from(n, [&](int a, int b) { return F(a, b) * G(a, b); });
    for (auto [r, s] : {std::pair{1.0, 1.0}, std::pair{2.0, 2.0}, std::pair{1.0, 2.0}, std::pair{1.5, 3.0}}) {
      const double t = 1.0 / (1.0 / r + 1.0 / s);
      CHECK(variation_value(P, t) <= variation_value(F, r) * variation_value(G, s) * (1 + 1e-12));
    }
  }
}

TEST_CASE("strong and weak quantities") {
  const ScaleFamily zero = test::constant_family(3, 1, {0, 0, 0});
  CHECK(strong_quantity(zero, 2.0, 1.0) == 0.0);
  CHECK(strong_quantity(zero, zero, 2.0, 2.0, 1.0) == 0.0);

  std::mt19937_64 rng(43);
  const ScaleFamily single(GridSpec(5), 2, Flavor::Raw, {test::random_signal(rng, 5)});
  CHECK(strong_quantity(single, single, 2.0, 2.0, 1.0) == 0.0);
  for (double p : {1.5, 2.0, 4.0}) {
    CHECK(strong_quantity(single, p, 2.0) / mixed_norm(single, p, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  }

  std::vector<DyadicSignal> fc, gc;
  for (int k = 0; k < 5; ++k) {
    fc.push_back(test::random_signal(rng, 5));
    gc.push_back(test::random_signal(rng, 5));
  }
  const ScaleFamily f(GridSpec(5), 1, Flavor::Raw, fc);
  const ScaleFamily g(GridSpec(5), 1, Flavor::Raw, gc);

  // Outer norm exponents: p for linear data, pq/(p+q) for bilinear data.
  std::vector<double> vlin(32), vbil(32);
  const BlockSumTable table = BlockSumTable::build(f, g);
  for (std::size_t x = 0; x < 32; ++x) {
    vlin[x] = variation_value(table.linear_values(x), 2.0);
    vbil[x] = variation_value(table.bilinear_values(x), 1.0);
  }
  CHECK(strong_quantity(f, 3.0, 2.0) == doctest::Approx(lp_norm(DyadicSignal(GridSpec(5), vlin), 3.0)));
  CHECK(strong_quantity(f, g, 2.0, 2.0, 1.0) == doctest::Approx(lp_norm(DyadicSignal(GridSpec(5), vbil), 1.0)));

  const double big = 1e6;
  CHECK(weak_quantity(f, g, 2.0, 2.0, 1.0, big).value == 0.0);
  CHECK(weak_quantity(f, 2.0, 2.0, big).diagonal == 0.0);
  for (double lambda : lambda_grid(-4, 4)) {
    for (double t : {1.0, 2.0}) {
      CHECK(weak_quantity(f, 2.0, t, lambda).value <= strong_quantity(f, 2.0, t) * (1 + 1e-12));
      CHECK(weak_quantity(f, g, 2.0, 2.0, t, lambda).value <= strong_quantity(f, g, 2.0, 2.0, t) * (1 + 1e-12));
    }
    double integral = 0.0;
    for (std::size_t x = 0; x < 32; ++x) integral += static_cast<double>(jump_count(table.bilinear_values(x), lambda).count);
    CHECK(weak_quantity(f, g, 2.0, 2.0, 1.0, lambda).diagonal == doctest::Approx(integral / 32.0));
  }
  CHECK(lambda_grid(-1, 1) == std::vector<double>{0.5, 1.0, 2.0});
}
