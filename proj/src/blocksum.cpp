#include "paravar/blocksum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "paravar/haar.hpp"

namespace paravar {

BlockSumTable::BlockSumTable(GridSpec grid, int i_min, int scale_count, int max_degree)
    : grid_(grid), i_min_(i_min), scale_count_(scale_count), max_degree_(max_degree) {
  const std::size_t ranges =
      static_cast<std::size_t>(max_degree) * static_cast<std::size_t>(max_degree + 1) / 2;
  prefix_.assign(ranges * grid.size() * static_cast<std::size_t>(scale_count + 1), 0.0L);
}

std::size_t BlockSumTable::range_id(int first, int last) const {
  if (first < 0 || last < first || last >= max_degree_) {
    throw std::out_of_range("factor range outside the table's degree");
  }
  // Ranges enumerated by first, then last.
  std::size_t id = 0;
  for (int p = 0; p < first; ++p) id += static_cast<std::size_t>(max_degree_ - p);
  return id + static_cast<std::size_t>(last - first);
}

BlockSumTable BlockSumTable::build(const ScaleFamily& f, const ScaleFamily& g, int max_degree,
                                   BlockSumOptions options) {
  if (max_degree < 1) throw std::invalid_argument("max_degree must be >= 1");
  std::vector<ScaleFamily> factors;
  for (int m = 0; m < max_degree; ++m) factors.push_back(m % 2 == 0 ? f : g);
  return build(factors, options);
}

BlockSumTable BlockSumTable::build(const std::vector<ScaleFamily>& factors,
                                   BlockSumOptions options) {
  if (factors.empty()) throw std::invalid_argument("block sum table needs at least one factor");
  for (const auto& factor : factors) require_compatible(factors.front(), factor);
  const ScaleFamily& head = factors.front();
  const int degree = static_cast<int>(factors.size());
  const int scales = head.scale_count();
  BlockSumTable table(head.grid(), head.i_min(), scales, degree);
  const std::size_t n = head.grid().size();

  for (int first = 0; first < degree; ++first) {
    for (int last = first; last < degree; ++last) {
      const std::size_t id = table.range_id(first, last);
      const std::size_t shorter = last > first ? table.range_id(first, last - 1) : 0;
      const ScaleFamily& newest = factors[static_cast<std::size_t>(last)];
      const bool flip = options.inject_prefix_sign_error && first == 0 && last == 1;
      for (std::size_t x = 0; x < n; ++x) {
        long double acc = 0.0L;
        for (int b = 0; b < scales; ++b) {
          const long double before = last > first ? table.prefix(shorter, x, b) : 1.0L;
          const long double increment = before * static_cast<long double>(newest.at(b)[x]);
          acc += flip ? -increment : increment;
          table.prefix(id, x, b + 1) = acc;
        }
      }
    }
  }
  if (options.self_check && !options.inject_prefix_sign_error && degree >= 2 &&
      scales <= kSelfCheckMaxScales) {
    table.self_check(factors);
  }
  return table;
}

void BlockSumTable::check_window(int a, int b) const {
  if (a < 0 || b > scale_count_ || a > b) {
    throw std::out_of_range("block window (" + std::to_string(a) + ", " + std::to_string(b) +
                            "] outside [0, " + std::to_string(scale_count_) + "]");
  }
}

double BlockSumTable::range_block(std::size_t x, int first, int last, int a, int b) const {
  check_window(a, b);
  if (x >= samples()) throw std::out_of_range("sample index out of range");
  range_id(first, last);
  if (a == b) return 0.0;
  // Chen: P_{p,q}(b) = sum_{m=p-1}^{q} P_{p,m}(a) S_{m+1..q}(a,b], with
  // P_{p,p-1} = 1 and S_{q+1..q} = 1. Solve for S_{s..q} from s = q down to p.
  std::vector<long double> tail(static_cast<std::size_t>(last - first + 2), 0.0L);
  auto tail_at = [&](int s) -> long double& { return tail[static_cast<std::size_t>(s - first)]; };
  tail_at(last + 1) = 1.0L;
  for (int s = last; s >= first; --s) {
    long double value = prefix(range_id(s, last), x, b);
    for (int m = s; m <= last; ++m) value -= prefix(range_id(s, m), x, a) * tail_at(m + 1);
    tail_at(s) = value;
  }
  return static_cast<double>(tail_at(first));
}

double BlockSumTable::multilinear(std::size_t x, int a, int b, int degree) const {
  if (degree < 1 || degree > max_degree_) throw std::out_of_range("degree outside [1, M_max]");
  return range_block(x, 0, degree - 1, a, b);
}

BlockValues BlockSumTable::linear_values(std::size_t x, int factor) const {
  const std::size_t id = range_id(factor, factor);
  BlockValues out(scale_count_);
  for (int a = 0; a < scale_count_; ++a) {
    const long double base = prefix(id, x, a);
    for (int b = a + 1; b <= scale_count_; ++b) {
      out.set(a, b, static_cast<double>(prefix(id, x, b) - base));
    }
  }
  return out;
}

BlockValues BlockSumTable::bilinear_values(std::size_t x) const {
  const std::size_t f_id = range_id(0, 0);
  const std::size_t g_id = range_id(1, 1);
  const std::size_t fg_id = range_id(0, 1);
  BlockValues out(scale_count_);
  for (int a = 0; a < scale_count_; ++a) {
    const long double fa = prefix(f_id, x, a);
    const long double ga = prefix(g_id, x, a);
    const long double sa = prefix(fg_id, x, a);
    for (int b = a + 1; b <= scale_count_; ++b) {
      const long double value = prefix(fg_id, x, b) - sa - fa * (prefix(g_id, x, b) - ga);
      out.set(a, b, static_cast<double>(value));
    }
  }
  return out;
}

BlockValues BlockSumTable::multilinear_values(std::size_t x, int degree) const {
  if (degree == 1) return linear_values(x);
  if (degree == 2) return bilinear_values(x);
  return BlockValues::from(scale_count_, [&](int a, int b) { return multilinear(x, a, b, degree); });
}

BlockValues BlockSumTable::product_values(std::size_t x) const {
  const std::size_t f_id = range_id(0, 0);
  const std::size_t g_id = range_id(1, 1);
  BlockValues out(scale_count_);
  for (int a = 0; a < scale_count_; ++a) {
    for (int b = a + 1; b <= scale_count_; ++b) {
      const long double fv = prefix(f_id, x, b) - prefix(f_id, x, a);
      const long double gv = prefix(g_id, x, b) - prefix(g_id, x, a);
      out.set(a, b, static_cast<double>(fv * gv));
    }
  }
  return out;
}

double direct_bilinear(const std::vector<double>& f, const std::vector<double>& g, int a, int b) {
  double acc = 0.0;
  for (int i = a; i < b; ++i) {
    for (int j = i + 1; j < b; ++j) {
      acc += f[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(j)];
    }
  }
  return acc;
}

std::vector<double> sample_values(const ScaleFamily& family, std::size_t x) {
  std::vector<double> out(static_cast<std::size_t>(family.scale_count()));
  for (int c = 0; c < family.scale_count(); ++c) out[static_cast<std::size_t>(c)] = family.at(c)[x];
  return out;
}

void BlockSumTable::self_check(const std::vector<ScaleFamily>& factors) const {
  const std::size_t n = samples();
  const std::size_t stride = std::max<std::size_t>(1, n / 8);
  for (std::size_t x = 0; x < n; x += stride) {
    const auto f = sample_values(factors[0], x);
    const auto g = sample_values(factors[1], x);
    for (int a = 0; a < scale_count_; ++a) {
      for (int b = a + 1; b <= scale_count_; ++b) {
        double magnitude = 0.0;
        for (int i = a; i < b; ++i) {
          for (int j = i + 1; j < b; ++j) {
            magnitude += std::abs(f[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(j)]);
          }
        }
        const double expected = direct_bilinear(f, g, a, b);
        if (std::abs(bilinear(x, a, b) - expected) > 1e-12 * (1.0 + magnitude)) {
          throw std::logic_error("block sum table disagrees with direct double sum at sample " +
                                 std::to_string(x));
        }
      }
    }
  }
}

ScaleFamily family_from_source(const DyadicSignal& f, const FamilySource& source) {
  if (std::holds_alternative<DiscreteSource>(source)) {
    return make_discrete_family(f, 1, f.grid().level());
  }
  const auto& c = std::get<ContinuousSource>(source);
  return make_continuous_family(f, c.profile, c.i_min, c.i_max);
}

namespace {

BlockSumTable pair_table(const DyadicSignal& f, const DyadicSignal& g, const FamilySource& source) {
  return BlockSumTable::build(family_from_source(f, source), family_from_source(g, source), 2);
}

}  // namespace

DyadicSignal paraproduct(const DyadicSignal& f, const DyadicSignal& g, const FamilySource& source) {
  const BlockSumTable table = pair_table(f, g, source);
  std::vector<double> out(table.samples());
  for (std::size_t x = 0; x < out.size(); ++x) out[x] = table.bilinear(x, 0, table.scale_count());
  return DyadicSignal(f.grid(), std::move(out));
}

DyadicSignal maximal_paraproduct(const DyadicSignal& f, const DyadicSignal& g,
                                 const FamilySource& source) {
  const BlockSumTable table = pair_table(f, g, source);
  std::vector<double> out(table.samples(), 0.0);
  for (std::size_t x = 0; x < out.size(); ++x) {
    const BlockValues values = table.bilinear_values(x);
    for (int a = 0; a < table.scale_count(); ++a) {
      for (int b = a + 1; b <= table.scale_count(); ++b) {
        out[x] = std::max(out[x], std::abs(values.get(a, b)));
      }
    }
  }
  return DyadicSignal(f.grid(), std::move(out));
}

}  // namespace paravar
