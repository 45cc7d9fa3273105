#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "paravar/family.hpp"
#include "paravar/grid.hpp"
#include "support.hpp"

using namespace paravar;
using paravar::test::signal;

namespace {

// Every periodic window [start, start + len) with 1 <= len <= n.
template <typename Fn>
void for_each_window(std::size_t n, Fn&& fn) {
  for (std::size_t len = 1; len <= n; ++len) {
    for (std::size_t start = 0; start < (len == n ? 1 : n); ++start) fn(start, len);
  }
}

DyadicSignal naive_maximal(const DyadicSignal& f) {
  const std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  for_each_window(n, [&](std::size_t start, std::size_t len) {
    double sum = 0.0;
    for (std::size_t k = 0; k < len; ++k) sum += std::abs(f[(start + k) % n]);
    for (std::size_t k = 0; k < len; ++k) {
      auto& slot = out[(start + k) % n];
      slot = std::max(slot, sum / static_cast<double>(len));
    }
  });
  return DyadicSignal(f.grid(), out);
}

DyadicSignal naive_sharp(const DyadicSignal& h) {
  const std::size_t n = h.size();
  std::vector<double> out(n, 0.0);
  for_each_window(n, [&](std::size_t start, std::size_t len) {
    std::vector<double> v;
    for (std::size_t k = 0; k < len; ++k) v.push_back(h[(start + k) % n]);
    // inf over c of the mean deviation, scanning every sample value as c
    double best = INFINITY;
    for (double c : v) {
      double dev = 0.0;
      for (double x : v) dev += std::abs(x - c);
      best = std::min(best, dev / static_cast<double>(len));
    }
    for (std::size_t k = 0; k < len; ++k) {
      auto& slot = out[(start + k) % n];
      slot = std::max(slot, best);
    }
  });
  return DyadicSignal(h.grid(), out);
}

}  // namespace

TEST_CASE("grid geometry") {
  const GridSpec grid(3);
  CHECK(grid.size() == 8);
  CHECK(grid.weight() == 0.125);
  CHECK_THROWS_AS(GridSpec(0), std::invalid_argument);
  CHECK_THROWS_AS(DyadicSignal(grid, std::vector<double>(7)), std::invalid_argument);
  CHECK_THROWS_AS(DyadicSignal(grid, std::vector<double>(8, NAN)), std::invalid_argument);

  const DyadicInterval I{2, 3};
  CHECK(I.length() == 0.25);
  CHECK(I.first_sample(grid) == 6);
  CHECK(I.sample_count(grid) == 2);
  CHECK(I.parent() == DyadicInterval{1, 1});
  CHECK(I.parent().contains(I));
  CHECK(DyadicInterval::containing(grid, 1, 5) == DyadicInterval{1, 1});

  // 3I wraps: neighbours of the last quarter are the third and the first.
  const auto mask = tripled_mask(grid, I);
  CHECK(std::vector<bool>(mask.begin(), mask.end()) ==
        std::vector<bool>{true, true, false, false, true, true, true, true});
  CHECK(tripled_covers_circle(DyadicInterval{1, 0}));
  CHECK_FALSE(tripled_covers_circle(DyadicInterval{2, 0}));
}

TEST_CASE("lp_norm examples") {
  CHECK(lp_norm(DyadicSignal::constant(GridSpec(2), 2.0), 3.0) == doctest::Approx(2.0));
  CHECK(lp_norm(signal({1, 0, 0, 0}), 1.0) == 0.25);
  CHECK(lp_norm(signal({3, -4}), 2.0) == doctest::Approx(std::sqrt(12.5)));
  CHECK(lp_norm(signal({3, -4}), INFINITY) == 4.0);
  CHECK_THROWS(lp_norm(signal({1, 2}), 0.0));

  std::mt19937_64 rng(1);
  for (int k = 0; k < 50; ++k) {
    const DyadicSignal f = test::random_signal(rng, 5);
    const double alpha = -3.7;
    for (double p : {0.5, 1.0, 2.0, 3.5}) {
      CHECK(lp_norm(alpha * f, p) == doctest::Approx(3.7 * lp_norm(f, p)).epsilon(1e-12));
    }
  }
}

TEST_CASE("mixed_norm examples and monotonicity in r") {
  const ScaleFamily one = test::constant_family(2, 1, {2.0});
  CHECK(mixed_norm(one, 1.5, 1.0) == doctest::Approx(2.0));
  CHECK(mixed_norm(one, 3.0, 2.0) == doctest::Approx(2.0));
  const ScaleFamily two = test::constant_family(2, 1, {1.0, 1.0});
  CHECK(mixed_norm(two, 1.0, 2.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(mixed_norm(two, 4.0, 2.0) == doctest::Approx(std::sqrt(2.0)));

  std::mt19937_64 rng(2);
  for (int k = 0; k < 200; ++k) {
    std::vector<DyadicSignal> comps;
    for (int i = 0; i < 4; ++i) comps.push_back(test::random_signal(rng, 4));
    const ScaleFamily f(GridSpec(4), 1, Flavor::Raw, comps);
    double direct = 0.0;
    for (const auto& c : comps) {
      for (double v : c.values()) direct += std::abs(v);
    }
    CHECK(mixed_norm(f, 1.0, 1.0) == doctest::Approx(direct / 16.0).epsilon(1e-12));
    CHECK(mixed_norm(f, 2.0, 1.5) >= mixed_norm(f, 2.0, 2.0));
    CHECK(mixed_norm(f, 2.0, 1.0) >= mixed_norm(f, 2.0, 1.5));
  }
  CHECK_THROWS(mixed_norm(two, 1.0, 0.5));
}

TEST_CASE("maximal function") {
  const DyadicSignal c = DyadicSignal::constant(GridSpec(3), -1.5);
  CHECK(maximal_function(c, WindowPolicy::AllAligned) == DyadicSignal::constant(GridSpec(3), 1.5));
  CHECK(maximal_function(signal({1, 0, 0, 0}), WindowPolicy::AllAligned)[1] == 0.5);
  CHECK(maximal_function_r(signal({1, 0}), 2.0, WindowPolicy::AllAligned)[0] == 1.0);

  std::mt19937_64 rng(3);
  for (int k = 0; k < 40; ++k) {
    const DyadicSignal f = test::random_signal(rng, 1 + k % 5);
    const DyadicSignal all = maximal_function(f, WindowPolicy::AllAligned);
    const DyadicSignal dyadic = maximal_function(f, WindowPolicy::Dyadic);
    CHECK(test::max_abs_diff(all, naive_maximal(f)) <= 1e-12);
    for (std::size_t j = 0; j < f.size(); ++j) {
      CHECK(all[j] >= dyadic[j]);
      CHECK(dyadic[j] >= std::abs(f[j]));
    }
    CHECK(maximal_function_r(f, 1.0, WindowPolicy::Dyadic) == dyadic);
  }
}

TEST_CASE("sharp function") {
  CHECK(lp_norm(sharp_function(DyadicSignal::constant(GridSpec(3), 4.0), WindowPolicy::AllAligned), INFINITY) == 0.0);
  const DyadicSignal s = sharp_function(signal({1, 0}), WindowPolicy::AllAligned);
  CHECK(s[0] == 0.5);
  CHECK(s[1] == 0.5);

  std::mt19937_64 rng(4);
  for (int k = 0; k < 40; ++k) {
    const DyadicSignal h = test::random_signal(rng, 1 + k % 5);
    const DyadicSignal sharp = sharp_function(h, WindowPolicy::AllAligned);
    CHECK(test::max_abs_diff(sharp, naive_sharp(h)) <= 1e-12);
    const DyadicSignal shifted = sharp_function(h + DyadicSignal::constant(h.grid(), 3.25), WindowPolicy::AllAligned);
    CHECK(test::max_abs_diff(sharp, shifted) <= 1e-12);
    for (WindowPolicy w : {WindowPolicy::Dyadic, WindowPolicy::AllAligned}) {
      const DyadicSignal sw = sharp_function(h, w);
      const DyadicSignal m = maximal_function(h, w);
      for (std::size_t j = 0; j < h.size(); ++j) CHECK(sw[j] <= 2.0 * m[j]);
    }
  }
}

TEST_CASE("pairwise_sum is exact on powers of two of equal terms") {
  const std::vector<double> v(1024, 0.1);
  CHECK(pairwise_sum(v) == 0.1 * 1024);
  CHECK(maximal_weak_constant(WindowPolicy::Dyadic) == 1.0);
  CHECK(maximal_weak_constant(WindowPolicy::AllAligned) == 2.0);
  CHECK(window_policy_from_string(to_string(WindowPolicy::AllAligned)) == WindowPolicy::AllAligned);
  CHECK_THROWS(window_policy_from_string("centred"));
}
