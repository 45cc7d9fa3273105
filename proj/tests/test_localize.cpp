#include <doctest.h>

#include <cmath>
#include <random>

#include "paravar/haar.hpp"
#include "paravar/localize.hpp"
#include "paravar/spectral.hpp"
#include "support.hpp"

using namespace paravar;
using paravar::test::signal;

namespace {

ScaleFamily random_raw(std::mt19937_64& rng, int level, int i_min, int scales) {
  std::vector<DyadicSignal> comps;
  for (int k = 0; k < scales; ++k) comps.push_back(test::random_signal(rng, level));
  return ScaleFamily(GridSpec(level), i_min, Flavor::Raw, std::move(comps));
}

DyadicSignal sum_parts(const CZDecomposition& cz, int local) {
  DyadicSignal s = cz.good.at(local);
  for (const auto& b : cz.bad) s = s + b.at(local);
  return s;
}

// Same physical Haar atom on [0, 1/4) at every scale 3..6, sampled at level L.
FarFieldReport atom_far_field(int L) {
  const GridSpec grid(L);
  std::vector<double> v(grid.size(), 0.0);
  const std::size_t quarter = grid.size() / 4;
  for (std::size_t j = 0; j < quarter; ++j) v[j] = j < quarter / 2 ? 1.0 : -1.0;
  const DyadicSignal atom(grid, v);
  const ScaleFamily bad(grid, 3, Flavor::Raw, {atom, atom, atom, atom});
  return far_field_bound({bad}, {DyadicInterval{2, 0}}, 1.0, make_profile(ProfileKind::Bandpass, 1));
}

}  // namespace

TEST_CASE("cz_decompose worked example") {
  const ScaleFamily f(GridSpec(2), 1, Flavor::Raw, {signal({4, 0, 0, 0})});
  const CZDecomposition cz = cz_decompose(f, 1.0, 1.0, WindowPolicy::Dyadic);
  REQUIRE(cz.intervals.size() == 1);
  CHECK(cz.intervals[0] == DyadicInterval{1, 0});
  CHECK(cz.good.at(0) == signal({2, 2, 0, 0}));
  REQUIRE(cz.bad.size() == 1);
  CHECK(cz.bad[0].at(0) == signal({2, -2, 0, 0}));
  CHECK(std::vector<bool>(cz.selected_mask) == std::vector<bool>{true, true, false, false});
}

TEST_CASE("cz_decompose properties") {
  const ScaleFamily small = test::constant_family(3, 1, {0.3, -0.2});
  const CZDecomposition none = cz_decompose(small, 1.0, 2.0, WindowPolicy::AllAligned);
  CHECK(none.intervals.empty());
  CHECK(none.bad.empty());
  CHECK(none.exceptional_measure == 0.0);
  CHECK(none.good == small);
  CHECK_THROWS(cz_decompose(small, 0.01, 1.0, WindowPolicy::Dyadic));

  std::mt19937_64 rng(60);
  for (int trial = 0; trial < 30; ++trial) {
    const ScaleFamily f = random_raw(rng, 6, 1, 4);
    const double r = trial % 2 ? 2.0 : 1.0;
    const WindowPolicy w = trial % 3 ? WindowPolicy::Dyadic : WindowPolicy::AllAligned;
    const double lambda = 2.0 * lp_norm(height(f, r), 1.0);
    const CZDecomposition cz = cz_decompose(f, lambda, r, w);
    for (int i = 0; i < f.scale_count(); ++i) CHECK(test::max_abs_diff(sum_parts(cz, i), f.at(i)) <= 1e-12);
    CHECK(lp_norm(height(cz.good, r), INFINITY) <= 2.0 * lambda * (1 + 1e-12));
    CHECK(cz.exceptional_measure <= maximal_weak_constant(w) * mixed_norm(f, 1.0, r) / lambda * (1 + 1e-12));
    for (std::size_t k = 0; k < cz.bad.size(); ++k) {
      const DyadicInterval I = cz.intervals[k];
      for (int i = 0; i < f.scale_count(); ++i) {
        double inside = 0.0;
        for (std::size_t j = 0; j < f.grid().size(); ++j) {
          const bool in = I.contains(DyadicInterval{6, j});
          if (!in) CHECK(cz.bad[k].at(i)[j] == 0.0);
          else inside += cz.bad[k].at(i)[j];
        }
        CHECK(std::abs(inside) <= 1e-9);
      }
    }

    // Homogeneity: alpha f at alpha lambda.
    const double alpha = 3.5;
    const CZDecomposition scaled = cz_decompose(f.scaled(alpha), alpha * lambda, r, w);
    CHECK(scaled.intervals == cz.intervals);
    for (int i = 0; i < f.scale_count(); ++i) {
      CHECK(test::max_abs_diff(scaled.good.at(i), alpha * cz.good.at(i)) <= 1e-12 * alpha * lambda);
    }
  }
}

TEST_CASE("make_tilde") {
  // Level 4, I = [0, 1/4): scales with 2^-i > 1/4 are i = 0, 1 (coarse).
  const ScaleFamily f = test::constant_family(4, 0, {1.5, -2.0, 7.0, 3.0});
  const TildeTruncation t = make_tilde(f, DyadicInterval{2, 0});
  CHECK(t.at(0) == 1.5);
  CHECK(t.at(1) == -2.0);
  CHECK(t.at(2) == 0.0);
  CHECK(t.at(3) == 0.0);

  const TildeTruncation whole = make_tilde(f, DyadicInterval{0, 0});
  for (int i = 0; i <= 3; ++i) CHECK(whole.at(i) == 0.0);

  std::mt19937_64 rng(61);
  const ScaleFamily g = random_raw(rng, 5, 0, 4);
  const TildeTruncation avg = make_tilde(g, DyadicInterval{3, 2});
  double mean = 0.0;
  for (std::size_t j = 8; j < 12; ++j) mean += g.at(1)[j];
  CHECK(avg.at(1) == doctest::Approx(mean / 4));
}

TEST_CASE("local_split") {
  const BandProfile profile = make_profile(ProfileKind::Bandpass, 1);
  std::mt19937_64 rng(62);
  for (int trial = 0; trial < 10; ++trial) {
    const ScaleFamily data = random_raw(rng, 7, 1, 6);
    const DyadicInterval I{3, static_cast<std::size_t>(trial % 8)};
    const LocalSplit split = local_split(data, profile, I);
    for (int i = data.i_min(); i <= data.i_max(); ++i) {
      const DyadicSignal lhs = split.convolved.component(i) - DyadicSignal::constant(data.grid(), split.tilde.at(i));
      const DyadicSignal rhs = split.h1.component(i) + split.h2.component(i) + split.h3.component(i);
      CHECK(test::max_abs_diff(lhs, rhs) <= 1e-12);
      const bool coarse = std::ldexp(1.0, -i) > I.length();
      if (coarse) {
        CHECK(lp_norm(split.h2.component(i), INFINITY) == 0.0);
        CHECK(lp_norm(split.h3.component(i), INFINITY) == 0.0);
      } else {
        CHECK(lp_norm(split.h1.component(i), INFINITY) == 0.0);
      }
    }
  }

  // Data supported inside I: nothing outside 3I, so h3 vanishes.
  const GridSpec grid(6);
  std::vector<double> inside(grid.size(), 0.0);
  for (std::size_t j = 16; j < 24; ++j) inside[j] = static_cast<double>(j % 3) - 1.0;
  const ScaleFamily local(grid, 3, Flavor::Raw, {DyadicSignal(grid, inside), DyadicSignal(grid, inside)});
  const LocalSplit in = local_split(local, profile, DyadicInterval{3, 2});
  for (const auto& c : in.h3.components()) CHECK(lp_norm(c, INFINITY) == 0.0);

  // Data supported outside 3I: h2 vanishes.
  std::vector<double> outside(grid.size(), 0.0);
  for (std::size_t j = 40; j < 56; ++j) outside[j] = 1.0;
  const ScaleFamily far(grid, 3, Flavor::Raw, {DyadicSignal(grid, outside)});
  const LocalSplit out = local_split(far, profile, DyadicInterval{3, 0});
  for (const auto& c : out.h2.components()) CHECK(lp_norm(c, INFINITY) == 0.0);
}

TEST_CASE("far_field_bound") {
  const BandProfile profile = make_profile(ProfileKind::Bandpass, 1);
  const ScaleFamily zero = test::constant_family(6, 3, {0.0, 0.0});
  CHECK(far_field_bound({zero}, {DyadicInterval{2, 1}}, 1.0, profile).max_ratio == 0.0);

  const FarFieldReport coarse = atom_far_field(9);
  const FarFieldReport fine = atom_far_field(10);
  CHECK(std::isfinite(coarse.max_ratio));
  CHECK(coarse.max_ratio > 0.0);
  CHECK(coarse.entries.size() == 4);
  MESSAGE("atom far-field ratio L=9: " << coarse.max_ratio << ", L=10: " << fine.max_ratio);
  CHECK(std::abs(fine.max_ratio / coarse.max_ratio - 1.0) <= 0.25);
}

TEST_CASE("sharp_target_check") {
  const ScaleFamily zero = test::constant_family(4, 1, {0.0, 0.0});
  const SharpTargetReport z = sharp_target_check(zero, 1.0, WindowPolicy::Dyadic);
  CHECK(z.evaluated == 0);
  CHECK(z.skipped == 16);
  const SharpTargetReport zb = sharp_target_check(zero, zero, ExponentSet{}, 1.0, WindowPolicy::Dyadic);
  CHECK(zb.evaluated == 0);

  std::mt19937_64 rng(63);
  // One scale: Tf = |f_1| and (|f_1|)# <= 2 M|f_1| = 2 M_1(height).
  const ScaleFamily single(GridSpec(5), 1, Flavor::Raw, {test::random_signal(rng, 5)});
  for (WindowPolicy w : {WindowPolicy::Dyadic, WindowPolicy::AllAligned}) {
    const SharpTargetReport rep = sharp_target_check(single, 1.0, w);
    CHECK(rep.evaluated == 32);
    CHECK(rep.max_ratio <= 2.0 * (1 + 1e-12));
    CHECK(rep.mean_ratio <= rep.max_ratio);
  }
  const ScaleFamily f = random_raw(rng, 5, 1, 4);
  const ScaleFamily g = random_raw(rng, 5, 1, 4);
  const SharpTargetReport b = sharp_target_check(f, g, ExponentSet{2, 2, 2, 2, 1}, 0.5, WindowPolicy::Dyadic);
  CHECK(b.evaluated + b.skipped == 32);
  CHECK(std::isfinite(b.max_ratio));
}
