#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "paravar/block_values.hpp"
#include "paravar/blocksum.hpp"
#include "paravar/family.hpp"

namespace paravar {

/// Optimal breakpoints (local, 0 <= N_0 < ... < N_K <= scale_count) and the
/// value (sum_k |A(N_{k-1}, N_k]|^t)^(1/t) they achieve.
struct VariationWitness {
  double value = 0.0;
  std::vector<int> breakpoints;
};

struct JumpWitness {
  double lambda = 0.0;
  std::size_t count = 0;
  /// Disjoint ordered windows (a, b] with |A(a, b]| > lambda.
  std::vector<std::pair<int, int>> blocks;
};

/// (sum_k |A(N_{k-1}, N_k]|^t)^(1/t) for the given breakpoints.
double evaluate_variation(const BlockValues& values, const std::vector<int>& breakpoints, double t);

/// Exact maximum over breakpoint sequences, O(scale_count^2).
VariationWitness variation_dp(const BlockValues& values, double t);
/// Value only; avoids the witness bookkeeping in sweeps.
double variation_value(const BlockValues& values, double t);

inline constexpr int kVariationBruteForceMaxScales = 16;
inline constexpr int kJumpBruteForceMaxScales = 14;

/// Exhaustive maximum over all 2^(scale_count-1) tilings.
VariationWitness variation_bruteforce(const BlockValues& values, double t);

/// Maximum number of disjoint ordered windows with |A| > lambda, O(scale_count^2).
JumpWitness jump_count(const BlockValues& values, double lambda);
/// Exhaustive over all breakpoint subsets of {0..scale_count}.
JumpWitness jump_count_bruteforce(const BlockValues& values, double lambda);
/// Earliest-end greedy. Not exact when |A| is not monotone under window
/// extension; kept for benchmarking against jump_count.
JumpWitness jump_count_greedy(const BlockValues& values, double lambda);

/// lambda * count^(1/t).
double weak_functional(const JumpWitness& jumps, double t);

/// lambda^-1 (max_N sum_k min(|A|, lambda)^(2t))^(1/t).
double rho_truncated(const BlockValues& values, double lambda, double t);

/// || V^t(linear f) ||_p.
double strong_quantity(const ScaleFamily& f, double p, double t);
/// || V^t(bilinear f, g) ||_u with u = pq/(p+q). Requires t >= 1/2.
double strong_quantity(const ScaleFamily& f, const ScaleFamily& g, double p, double q, double t);

struct WeakQuantity {
  /// || lambda * count^(1/t) ||_outer.
  double value = 0.0;
  /// integral of the jump count, (1/n) sum_x count(x).
  double diagonal = 0.0;
};

WeakQuantity weak_quantity(const ScaleFamily& f, double p, double t, double lambda);
WeakQuantity weak_quantity(const ScaleFamily& f, const ScaleFamily& g, double p, double q, double t,
                           double lambda);

/// Geometric lambda grid 2^lo, ..., 2^hi.
std::vector<double> lambda_grid(int lo = -10, int hi = 10);

}  // namespace paravar
