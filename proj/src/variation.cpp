#include "paravar/variation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace paravar {

namespace {

void require_positive_t(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("variation exponent t must be positive");
}

void require_positive_lambda(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
}

// Max over tilings of sum_k term(a, b); fills `from` with the argmax a for each b.
template <typename Term>
double tiling_dp(int scales, Term&& term, std::vector<int>* from) {
  std::vector<double> best(static_cast<std::size_t>(scales + 1), 0.0);
  if (from) from->assign(static_cast<std::size_t>(scales + 1), 0);
  for (int b = 1; b <= scales; ++b) {
    double top = -1.0;
    int arg = 0;
    for (int a = 0; a < b; ++a) {
      const double candidate = best[static_cast<std::size_t>(a)] + term(a, b);
      if (candidate > top) {
        top = candidate;
        arg = a;
      }
    }
    best[static_cast<std::size_t>(b)] = top;
    if (from) (*from)[static_cast<std::size_t>(b)] = arg;
  }
  return best[static_cast<std::size_t>(scales)];
}

std::vector<int> trace_back(const std::vector<int>& from, int scales) {
  std::vector<int> out{scales};
  for (int b = scales; b > 0;) {
    b = from[static_cast<std::size_t>(b)];
    out.push_back(b);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

double evaluate_variation(const BlockValues& values, const std::vector<int>& breakpoints, double t) {
  require_positive_t(t);
  double acc = 0.0;
  for (std::size_t k = 1; k < breakpoints.size(); ++k) {
    acc += std::pow(std::abs(values(breakpoints[k - 1], breakpoints[k])), t);
  }
  return std::pow(acc, 1.0 / t);
}

VariationWitness variation_dp(const BlockValues& values, double t) {
  require_positive_t(t);
  const int scales = values.scale_count();
  std::vector<int> from;
  const double best =
      tiling_dp(scales, [&](int a, int b) { return std::pow(std::abs(values.get(a, b)), t); }, &from);
  return {std::pow(best, 1.0 / t), trace_back(from, scales)};
}

double variation_value(const BlockValues& values, double t) {
  require_positive_t(t);
  const double best = tiling_dp(
      values.scale_count(), [&](int a, int b) { return std::pow(std::abs(values.get(a, b)), t); },
      nullptr);
  return std::pow(best, 1.0 / t);
}

VariationWitness variation_bruteforce(const BlockValues& values, double t) {
  require_positive_t(t);
  const int scales = values.scale_count();
  if (scales > kVariationBruteForceMaxScales) {
    throw std::invalid_argument("brute-force variation limited to " +
                                std::to_string(kVariationBruteForceMaxScales) + " scales");
  }
  VariationWitness best{0.0, {0}};
  if (scales == 0) return best;
  double best_sum = -1.0;
  const unsigned interior = static_cast<unsigned>(scales - 1);
  for (unsigned mask = 0; mask < (1u << interior); ++mask) {
    std::vector<int> points{0};
    for (unsigned bit = 0; bit < interior; ++bit) {
      if (mask & (1u << bit)) points.push_back(static_cast<int>(bit) + 1);
    }
    points.push_back(scales);
    double sum = 0.0;
    for (std::size_t k = 1; k < points.size(); ++k) {
      sum += std::pow(std::abs(values(points[k - 1], points[k])), t);
    }
    if (sum > best_sum) {
      best_sum = sum;
      best.breakpoints = points;
    }
  }
  best.value = std::pow(best_sum, 1.0 / t);
  return best;
}

JumpWitness jump_count(const BlockValues& values, double lambda) {
  require_positive_lambda(lambda);
  const int scales = values.scale_count();
  std::vector<std::size_t> best(static_cast<std::size_t>(scales + 1), 0);
  // from[b] = -1 when best(b) = best(b-1), else the start a of the last jump.
  std::vector<int> from(static_cast<std::size_t>(scales + 1), -1);
  for (int b = 1; b <= scales; ++b) {
    std::size_t top = best[static_cast<std::size_t>(b - 1)];
    int arg = -1;
    for (int a = 0; a < b; ++a) {
      if (std::abs(values.get(a, b)) > lambda && best[static_cast<std::size_t>(a)] + 1 > top) {
        top = best[static_cast<std::size_t>(a)] + 1;
        arg = a;
      }
    }
    best[static_cast<std::size_t>(b)] = top;
    from[static_cast<std::size_t>(b)] = arg;
  }
  JumpWitness out{lambda, best[static_cast<std::size_t>(scales)], {}};
  for (int b = scales; b > 0;) {
    const int a = from[static_cast<std::size_t>(b)];
    if (a < 0) {
      --b;
    } else {
      out.blocks.emplace_back(a, b);
      b = a;
    }
  }
  std::reverse(out.blocks.begin(), out.blocks.end());
  return out;
}

JumpWitness jump_count_bruteforce(const BlockValues& values, double lambda) {
  require_positive_lambda(lambda);
  const int scales = values.scale_count();
  if (scales > kJumpBruteForceMaxScales) {
    throw std::invalid_argument("brute-force jump count limited to " +
                                std::to_string(kJumpBruteForceMaxScales) + " scales");
  }
  JumpWitness best{lambda, 0, {}};
  const unsigned points = static_cast<unsigned>(scales + 1);
  for (unsigned mask = 0; mask < (1u << points); ++mask) {
    std::vector<std::pair<int, int>> blocks;
    int previous = -1;
    for (unsigned bit = 0; bit < points; ++bit) {
      if (!(mask & (1u << bit))) continue;
      const int point = static_cast<int>(bit);
      if (previous >= 0 && std::abs(values(previous, point)) > lambda) {
        blocks.emplace_back(previous, point);
      }
      previous = point;
    }
    if (blocks.size() > best.count) {
      best.count = blocks.size();
      best.blocks = std::move(blocks);
    }
  }
  return best;
}

JumpWitness jump_count_greedy(const BlockValues& values, double lambda) {
  require_positive_lambda(lambda);
  JumpWitness out{lambda, 0, {}};
  int start = 0;
  for (int b = 1; b <= values.scale_count(); ++b) {
    if (std::abs(values.get(start, b)) > lambda) {
      out.blocks.emplace_back(start, b);
      start = b;
    }
  }
  out.count = out.blocks.size();
  return out;
}

double weak_functional(const JumpWitness& jumps, double t) {
  require_positive_t(t);
  return jumps.lambda * std::pow(static_cast<double>(jumps.count), 1.0 / t);
}

double rho_truncated(const BlockValues& values, double lambda, double t) {
  require_positive_lambda(lambda);
  if (!(t >= 0.5)) throw std::invalid_argument("rho_truncated requires t >= 1/2");
  const double best = tiling_dp(
      values.scale_count(),
      [&](int a, int b) { return std::pow(std::min(std::abs(values.get(a, b)), lambda), 2.0 * t); },
      nullptr);
  return std::pow(best, 1.0 / t) / lambda;
}

namespace {

template <typename PerSample>
DyadicSignal per_sample(const GridSpec& grid, PerSample&& fn) {
  std::vector<double> out(grid.size());
  for (std::size_t x = 0; x < out.size(); ++x) out[x] = fn(x);
  return DyadicSignal(grid, std::move(out));
}

BlockSumTable linear_table(const ScaleFamily& f) { return BlockSumTable::build({f}); }

BlockSumTable bilinear_table(const ScaleFamily& f, const ScaleFamily& g, double t) {
  if (!(t >= 0.5)) throw std::invalid_argument("bilinear variation requires t >= 1/2");
  return BlockSumTable::build(f, g, 2);
}

WeakQuantity weak_from_table(const BlockSumTable& table, bool bilinear, double outer, double t,
                             double lambda) {
  require_positive_t(t);
  double total = 0.0;
  const DyadicSignal weak = per_sample(table.grid(), [&](std::size_t x) {
    const JumpWitness jumps = jump_count(bilinear ? table.bilinear_values(x) : table.linear_values(x),
                                         lambda);
    total += static_cast<double>(jumps.count);
    return weak_functional(jumps, t);
  });
  return {lp_norm(weak, outer), total * table.grid().weight()};
}

}  // namespace

double strong_quantity(const ScaleFamily& f, double p, double t) {
  require_positive_t(t);
  const BlockSumTable table = linear_table(f);
  return lp_norm(per_sample(f.grid(), [&](std::size_t x) {
                   return variation_value(table.linear_values(x), t);
                 }),
                 p);
}

double strong_quantity(const ScaleFamily& f, const ScaleFamily& g, double p, double q, double t) {
  const BlockSumTable table = bilinear_table(f, g, t);
  const double u = ExponentSet{p, q, 1.0, 1.0, t}.u();
  return lp_norm(per_sample(f.grid(), [&](std::size_t x) {
                   return variation_value(table.bilinear_values(x), t);
                 }),
                 u);
}

WeakQuantity weak_quantity(const ScaleFamily& f, double p, double t, double lambda) {
  return weak_from_table(linear_table(f), false, p, t, lambda);
}

WeakQuantity weak_quantity(const ScaleFamily& f, const ScaleFamily& g, double p, double q, double t,
                           double lambda) {
  const double u = ExponentSet{p, q, 1.0, 1.0, t}.u();
  return weak_from_table(bilinear_table(f, g, t), true, u, t, lambda);
}

std::vector<double> lambda_grid(int lo, int hi) {
  std::vector<double> out;
  for (int e = lo; e <= hi; ++e) out.push_back(std::ldexp(1.0, e));
  return out;
}

}  // namespace paravar
