#include "paravar/localize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "paravar/blocksum.hpp"
#include "paravar/variation.hpp"

namespace paravar {

CZDecomposition cz_decompose(const ScaleFamily& family, double lambda, double r,
                             WindowPolicy windows) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(r >= 1.0 && r <= 2.0)) throw std::invalid_argument("r must lie in [1, 2]");
  const GridSpec& grid = family.grid();
  const int level = grid.level();
  const std::size_t n = grid.size();
  const DyadicSignal h = height(family, r);
  if (mean(h) > lambda) {
    throw std::invalid_argument("lambda is below the mean height; no maximal dyadic interval fits");
  }

  // sums[s][a]: sum of h over the interval (s, a).
  std::vector<std::vector<double>> sums(static_cast<std::size_t>(level + 1));
  sums[static_cast<std::size_t>(level)].assign(h.values().begin(), h.values().end());
  for (int s = level - 1; s >= 0; --s) {
    const auto& child = sums[static_cast<std::size_t>(s + 1)];
    auto& parent = sums[static_cast<std::size_t>(s)];
    parent.resize(std::size_t{1} << s);
    for (std::size_t a = 0; a < parent.size(); ++a) parent[a] = child[2 * a] + child[2 * a + 1];
  }

  CZDecomposition out{lambda, r, windows, {}, 0.0, {}, std::vector<bool>(n, false), family, {}};
  for (int s = 1; s <= level; ++s) {
    const std::size_t width = std::size_t{1} << (level - s);
    const auto& row = sums[static_cast<std::size_t>(s)];
    for (std::size_t a = 0; a < row.size(); ++a) {
      const std::size_t first = a * width;
      if (out.selected_mask[first]) continue;  // inside an already selected ancestor
      if (row[a] / static_cast<double>(width) > lambda) {
        out.intervals.push_back({s, a});
        for (std::size_t j = first; j < first + width; ++j) out.selected_mask[j] = true;
      }
    }
  }
  std::sort(out.intervals.begin(), out.intervals.end(), [&](const auto& x, const auto& y) {
    return x.first_sample(grid) < y.first_sample(grid);
  });

  std::vector<std::vector<double>> good;
  for (const auto& component : family.components()) good.emplace_back(component.values().begin(), component.values().end());
  for (const auto& interval : out.intervals) {
    const std::size_t first = interval.first_sample(grid);
    const std::size_t count = interval.sample_count(grid);
    std::vector<DyadicSignal> parts;
    for (int c = 0; c < family.scale_count(); ++c) {
      const auto values = family.at(c).values();
      const double avg = pairwise_sum(values.subspan(first, count)) / static_cast<double>(count);
      std::vector<double> part(n, 0.0);
      for (std::size_t j = first; j < first + count; ++j) {
        part[j] = values[j] - avg;
        good[static_cast<std::size_t>(c)][j] = avg;
      }
      parts.emplace_back(grid, std::move(part));
    }
    out.bad.push_back(family.with_components(std::move(parts)));
  }
  std::vector<DyadicSignal> good_components;
  for (auto& values : good) good_components.emplace_back(grid, std::move(values));
  out.good = family.with_components(std::move(good_components));

  const DyadicSignal maximal = maximal_function(h, windows);
  out.exceptional.assign(n, false);
  std::size_t count = 0;
  for (std::size_t j = 0; j < n; ++j) {
    out.exceptional[j] = maximal[j] > lambda;
    count += out.exceptional[j] ? 1 : 0;
  }
  out.exceptional_measure = static_cast<double>(count) * grid.weight();
  return out;
}

TildeTruncation make_tilde(const ScaleFamily& convolved, const DyadicInterval& interval) {
  const GridSpec& grid = convolved.grid();
  TildeTruncation out{interval, convolved.i_min(), {}};
  const std::size_t first = interval.first_sample(grid);
  const std::size_t count = interval.sample_count(grid);
  for (int i = convolved.i_min(); i <= convolved.i_max(); ++i) {
    if (i < interval.scale) {
      const auto values = convolved.component(i).values();
      out.values.push_back(pairwise_sum(values.subspan(first, count)) / static_cast<double>(count));
    } else {
      out.values.push_back(0.0);
    }
  }
  return out;
}

LocalSplit local_split(const ScaleFamily& data, const BandProfile& profile,
                       const DyadicInterval& interval) {
  const GridSpec& grid = data.grid();
  const ScaleFamily convolved = convolve_family(data, profile);
  TildeTruncation tilde = make_tilde(convolved, interval);
  const std::vector<bool> near = tripled_mask(grid, interval);
  const bool covers = tripled_covers_circle(interval);
  std::vector<DyadicSignal> h1;
  std::vector<DyadicSignal> h2;
  std::vector<DyadicSignal> h3;
  const DyadicSignal zero = DyadicSignal::zeros(grid);
  for (int i = data.i_min(); i <= data.i_max(); ++i) {
    if (i < interval.scale) {
      h1.push_back(convolved.component(i) - DyadicSignal::constant(grid, tilde.at(i)));
      h2.push_back(zero);
      h3.push_back(zero);
      continue;
    }
    h1.push_back(zero);
    if (covers) {
      h2.push_back(convolved.component(i));
      h3.push_back(zero);
      continue;
    }
    const auto values = data.component(i).values();
    std::vector<double> inside(values.size(), 0.0);
    std::vector<double> outside(values.size(), 0.0);
    for (std::size_t j = 0; j < values.size(); ++j) (near[j] ? inside : outside)[j] = values[j];
    h2.push_back(convolve_scale(DyadicSignal(grid, std::move(inside)), profile, i));
    h3.push_back(convolve_scale(DyadicSignal(grid, std::move(outside)), profile, i));
  }
  return {interval,
          std::move(tilde),
          convolved,
          convolved.with_components(std::move(h1)),
          convolved.with_components(std::move(h2)),
          convolved.with_components(std::move(h3))};
}

FarFieldReport far_field_bound(const std::vector<ScaleFamily>& bad,
                               const std::vector<DyadicInterval>& intervals, double lambda,
                               const BandProfile& profile, std::optional<double> epsilon) {
  if (bad.size() != intervals.size()) throw std::invalid_argument("one bad part per interval");
  const double eps = epsilon.value_or(profile.epsilon());
  FarFieldReport report;
  for (std::size_t k = 0; k < bad.size(); ++k) {
    const DyadicInterval& interval = intervals[k];
    if (tripled_covers_circle(interval)) continue;
    const GridSpec& grid = bad[k].grid();
    const std::vector<bool> near = tripled_mask(grid, interval);
    const double length = interval.length();
    for (int i = bad[k].i_min(); i <= bad[k].i_max(); ++i) {
      const DyadicSignal far = convolve_scale(bad[k].component(i), profile, i);
      double mass = 0.0;
      for (std::size_t j = 0; j < far.size(); ++j) {
        if (!near[j]) mass += std::abs(far[j]);
      }
      mass *= grid.weight();
      const double relative = std::ldexp(length, i);
      const double scale = lambda * length * std::min(relative, std::pow(relative, -eps));
      const double ratio = mass / scale;
      report.entries.push_back({interval, i, mass, ratio});
      report.max_ratio = std::max(report.max_ratio, ratio);
    }
  }
  return report;
}

FarFieldReport far_field_bound(const CZDecomposition& cz, const BandProfile& profile,
                               std::optional<double> epsilon) {
  return far_field_bound(cz.bad, cz.intervals, cz.lambda, profile, epsilon);
}

namespace {

SharpTargetReport compare(const DyadicSignal& lhs, const DyadicSignal& rhs) {
  SharpTargetReport report;
  double total = 0.0;
  for (std::size_t j = 0; j < lhs.size(); ++j) {
    if (rhs[j] == 0.0) {
      ++report.skipped;
      continue;
    }
    const double ratio = lhs[j] / rhs[j];
    report.max_ratio = std::max(report.max_ratio, ratio);
    total += ratio;
    ++report.evaluated;
  }
  if (report.evaluated > 0) report.mean_ratio = total / static_cast<double>(report.evaluated);
  return report;
}

}  // namespace

SharpTargetReport sharp_target_check(const ScaleFamily& f, double r, WindowPolicy windows) {
  const BlockSumTable table = BlockSumTable::build({f});
  std::vector<double> tf(f.grid().size());
  for (std::size_t x = 0; x < tf.size(); ++x) tf[x] = variation_value(table.linear_values(x), r);
  const DyadicSignal lhs = sharp_function(DyadicSignal(f.grid(), std::move(tf)), windows);
  const DyadicSignal rhs = maximal_function_r(height(f, r), r, windows);
  return compare(lhs, rhs);
}

SharpTargetReport sharp_target_check(const ScaleFamily& f, const ScaleFamily& g,
                                     const ExponentSet& exponents, double lambda,
                                     WindowPolicy windows) {
  const BlockSumTable table = BlockSumTable::build(f, g, 2);
  std::vector<double> t_lambda(f.grid().size());
  for (std::size_t x = 0; x < t_lambda.size(); ++x) {
    t_lambda[x] = std::sqrt(lambda * rho_truncated(table.bilinear_values(x), lambda, exponents.t));
  }
  const DyadicSignal sharp = sharp_function(DyadicSignal(f.grid(), std::move(t_lambda)), windows);
  std::vector<double> lhs(sharp.size());
  for (std::size_t x = 0; x < lhs.size(); ++x) lhs[x] = sharp[x] * sharp[x] / lambda;
  const DyadicSignal mf = maximal_function_r(height(f, exponents.r), exponents.r, windows);
  const DyadicSignal mg = maximal_function_r(height(g, exponents.s), exponents.s, windows);
  return compare(DyadicSignal(f.grid(), std::move(lhs)), mf * mg);
}

}  // namespace paravar
