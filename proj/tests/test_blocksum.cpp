#include <doctest.h>

#include <cmath>
#include <random>

#include "paravar/blocksum.hpp"
#include "paravar/haar.hpp"
#include "support.hpp"

using namespace paravar;
using paravar::test::signal;

namespace {

ScaleFamily random_family(std::mt19937_64& rng, int level, int i_min, int scales) {
  std::vector<DyadicSignal> comps;
  for (int k = 0; k < scales; ++k) comps.push_back(test::random_signal(rng, level));
  return ScaleFamily(GridSpec(level), i_min, Flavor::Raw, std::move(comps));
}

// Brute-force iterated sum over a < i_1 < ... < i_M <= b (local breakpoints).
double brute_iterated(const std::vector<std::vector<double>>& factors, int a, int b) {
  const int M = static_cast<int>(factors.size());
  double total = 0.0;
  std::vector<int> idx(static_cast<std::size_t>(M));
  auto rec = [&](auto&& self, int depth, int lo, double prod) -> void {
    if (depth == M) {
      total += prod;
      return;
    }
    for (int i = lo; i < b; ++i) self(self, depth + 1, i + 1, prod * factors[static_cast<std::size_t>(depth)][static_cast<std::size_t>(i)]);
  };
  rec(rec, 0, a, 1.0);
  return total;
}

}  // namespace

TEST_CASE("table examples") {
  const ScaleFamily zero = test::constant_family(3, 1, {0, 0, 0});
  const BlockSumTable z = BlockSumTable::build(zero, zero);
  for (int a = 0; a <= 3; ++a) {
    for (int b = a; b <= 3; ++b) {
      CHECK(z.bilinear(0, a, b) == 0.0);
      CHECK(z.linear(0, a, b) == 0.0);
    }
  }

  const ScaleFamily single = test::constant_family(2, 1, {3.0});
  CHECK(BlockSumTable::build(single, single).bilinear(2, 0, 1) == 0.0);

  const ScaleFamily ones = test::constant_family(2, 1, {1.0, 1.0});
  const BlockSumTable t = BlockSumTable::build(ones, ones);
  CHECK(t.bilinear(0, 0, 2) == 1.0);
  CHECK(t.bilinear(0, 0, 1) + t.bilinear(0, 1, 2) + t.linear(0, 0, 1) * t.linear_factor(0, 1, 1, 2) == 1.0);

  const ScaleFamily pm = test::constant_family(1, 1, {1.0, -1.0});
  const BlockSumTable l = BlockSumTable::build(pm, pm);
  CHECK(l.linear(1, 0, 2) == 0.0);
  CHECK(l.linear(1, 1, 1) == 0.0);
  CHECK(BlockSumTable::build(test::constant_family(1, 1, {5.0, 2.0}), pm).linear(0, 0, 1) == 5.0);

  const ScaleFamily four = test::constant_family(1, 1, {1, 1, 1, 1});
  const BlockSumTable cube = BlockSumTable::build({four, four, four});
  CHECK(cube.multilinear(0, 0, 4, 3) == 4.0);
  CHECK(cube.multilinear(0, 0, 4, 2) == 6.0);
  CHECK(cube.multilinear(0, 0, 4, 1) == 4.0);

  CHECK_THROWS(t.bilinear(0, 2, 1));
  CHECK_THROWS(t.bilinear(0, 0, 3));
  CHECK_THROWS(t.multilinear(0, 0, 2, 4));
  CHECK_THROWS(BlockSumTable::build(ones, test::constant_family(2, 2, {1.0, 1.0})));
}

TEST_CASE("blocks match brute force") {
  std::mt19937_64 rng(30);
  for (int trial = 0; trial < 20; ++trial) {
    const int scales = 1 + trial % 10;
    const std::vector<ScaleFamily> fam = {random_family(rng, 3, 1, scales), random_family(rng, 3, 1, scales),
                                          random_family(rng, 3, 1, scales)};
    const BlockSumTable table = BlockSumTable::build(fam);
    for (std::size_t x = 0; x < 8; ++x) {
      std::vector<std::vector<double>> v;
      for (const auto& f : fam) v.push_back(sample_values(f, x));
      for (int a = 0; a <= scales; ++a) {
        for (int b = a; b <= scales; ++b) {
          CHECK(table.linear(x, a, b) == doctest::Approx(brute_iterated({v[0]}, a, b)).epsilon(1e-12).scale(1.0));
          CHECK(table.bilinear(x, a, b) == doctest::Approx(direct_bilinear(v[0], v[1], a, b)).epsilon(1e-12).scale(1.0));
          CHECK(table.range_block(x, 1, 2, a, b) ==
                doctest::Approx(brute_iterated({v[1], v[2]}, a, b)).epsilon(1e-12).scale(1.0));
          CHECK(table.multilinear(x, a, b, 3) == doctest::Approx(brute_iterated(v, a, b)).epsilon(1e-10).scale(1.0));
        }
      }
      const BlockValues bv = table.bilinear_values(x);
      const BlockValues pv = table.product_values(x);
      CHECK(bv(0, scales) == doctest::Approx(table.bilinear(x, 0, scales)));
      CHECK(pv(0, scales) == doctest::Approx(table.linear(x, 0, scales) * table.linear_factor(x, 1, 0, scales)));
    }
  }
}

TEST_CASE("splitting identity, exhaustive") {
  std::mt19937_64 rng(31);
  for (int scales = 2; scales <= 10; ++scales) {
    const ScaleFamily f = random_family(rng, 2, 0, scales);
    const ScaleFamily g = random_family(rng, 2, 0, scales);
    const BlockSumTable t = BlockSumTable::build(f, g);
    for (std::size_t x = 0; x < 4; ++x) {
      for (int a = 0; a <= scales; ++a) {
        for (int b = a; b <= scales; ++b) {
          for (int c = b; c <= scales; ++c) {
            const double rhs = t.bilinear(x, a, b) + t.bilinear(x, b, c) + t.linear(x, a, b) * t.linear_factor(x, 1, b, c);
            CHECK(std::abs(t.bilinear(x, a, c) - rhs) <= 1e-12 * (1 + std::abs(rhs)));
          }
        }
      }
    }
  }
}

TEST_CASE("Chen identity for M <= 3") {
  std::mt19937_64 rng(32);
  for (int scales = 1; scales <= 8; ++scales) {
    const std::vector<ScaleFamily> fam = {random_family(rng, 1, 1, scales), random_family(rng, 1, 1, scales),
                                          random_family(rng, 1, 1, scales)};
    const BlockSumTable t = BlockSumTable::build(fam);
    for (int M = 1; M <= 3; ++M) {
      for (int a = 0; a <= scales; ++a) {
        for (int b = a; b <= scales; ++b) {
          for (int c = b; c <= scales; ++c) {
            // sum_m S_{0..m-1}(a,b] S_{m..M-1}(b,c], empty ranges = 1
            double sum = 0.0;
            for (int m = 0; m <= M; ++m) {
              const double left = m == 0 ? 1.0 : t.range_block(0, 0, m - 1, a, b);
              const double right = m == M ? 1.0 : t.range_block(0, m, M - 1, b, c);
              sum += left * right;
            }
            CHECK(std::abs(sum - t.multilinear(0, a, c, M)) <= 1e-10 * (1 + std::abs(sum)));
          }
        }
      }
    }
  }
}

TEST_CASE("injected prefix error is visible") {
  std::mt19937_64 rng(33);
  const ScaleFamily f = random_family(rng, 2, 1, 6);
  const ScaleFamily g = random_family(rng, 2, 1, 6);
  BlockSumOptions opts;
  opts.inject_prefix_sign_error = true;
  opts.self_check = false;
  const BlockSumTable bad = BlockSumTable::build(f, g, 2, opts);
  double worst = 0.0;
  for (int b = 2; b <= 6; ++b) {
    worst = std::max(worst, std::abs(bad.bilinear(0, 0, b) - direct_bilinear(sample_values(f, 0), sample_values(g, 0), 0, b)));
  }
  CHECK(worst > 1e-6);
}

TEST_CASE("paraproducts") {
  const DyadicSignal c = DyadicSignal::constant(GridSpec(4), 2.0);
  std::mt19937_64 rng(34);
  const DyadicSignal r = test::random_signal(rng, 4);
  CHECK(lp_norm(paraproduct(r, c, DiscreteSource{}), INFINITY) == 0.0);
  CHECK(lp_norm(paraproduct(c, r, DiscreteSource{}), INFINITY) == 0.0);
  CHECK(lp_norm(maximal_paraproduct(r, DyadicSignal::constant(GridSpec(4), 0.0), DiscreteSource{}), INFINITY) == 0.0);

  // f only at scale 1, g only at scale 2: the one pair is f_1 g_2.
  const DyadicSignal f = signal({1, 1, -1, -1});
  const DyadicSignal g = signal({1, -1, 0, 0});
  CHECK(maximal_paraproduct(f, g, DiscreteSource{}) == signal({1, 1, 0, 0}));
  CHECK(paraproduct(f, g, DiscreteSource{}) == signal({1, -1, 0, 0}));

  const std::vector<FamilySource> sources = {
      DiscreteSource{}, ContinuousSource{make_profile(ProfileKind::Bandpass, 1), 1, 5}};
  for (const auto& source : sources) {
    for (int k = 0; k < 10; ++k) {
      const DyadicSignal a = test::random_signal(rng, 6);
      const DyadicSignal b = test::random_signal(rng, 6);
      const DyadicSignal p = paraproduct(a, b, source);
      const DyadicSignal m = maximal_paraproduct(a, b, source);
      const ScaleFamily fa = family_from_source(a, source);
      const ScaleFamily fb = family_from_source(b, source);
      for (std::size_t x = 0; x < a.size(); ++x) {
        const auto va = sample_values(fa, x);
        const auto vb = sample_values(fb, x);
        const int n = static_cast<int>(va.size());
        CHECK(p[x] == doctest::Approx(direct_bilinear(va, vb, 0, n)).epsilon(1e-12).scale(1.0));
        double sup = 0.0;
        for (int lo = 0; lo <= n; ++lo) {
          for (int hi = lo; hi <= n; ++hi) sup = std::max(sup, std::abs(direct_bilinear(va, vb, lo, hi)));
        }
        CHECK(m[x] == doctest::Approx(sup).epsilon(1e-12).scale(1.0));
        CHECK(m[x] >= std::abs(p[x]));
      }
    }
  }
}
