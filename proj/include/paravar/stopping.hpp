#pragma once

#include <cstddef>
#include <vector>

#include "paravar/family.hpp"
#include "paravar/grid.hpp"

namespace paravar {

class BlockSumTable;

/// Per-sample increasing scale sequences N_0(x) < N_1(x) < ... (global scale
/// indices in [0, L]). This type does not enforce the stopping-time property;
/// use is_stopping_time for that.
struct StoppingTime {
  GridSpec grid{1};
  std::vector<std::vector<int>> sequences;  // sequences[x][k]
};

/// Every sequence is strictly increasing within [0, L] and N_k is constant on
/// the dyadic interval of length 2^-N_k(x) containing x (its tree top).
bool is_stopping_time(const StoppingTime& times);

enum class Trigger {
  Initial,    ///< N~_0
  Bilinear,   ///< |S(N~_{k-1}, m]| >= lambda/4
  Product,    ///< sup_m' |F(N~_{k-1}, m']| |G(m', m]| >= lambda/4
  Both,       ///< both conditions fire at the same m
  Forced,     ///< no sample in the tree top triggers: N~_k = N~_{k-1} + 1
  Exhausted,  ///< this sample never triggers, others in its top do: N~_k = i_max
};

const char* to_string(Trigger trigger);

struct AdaptedStoppingTime {
  StoppingTime times;
  std::vector<std::vector<Trigger>> triggers;  // parallel to times.sequences
  double lambda = 0.0;
};

/// The adapted stopping time at level lambda: N~_0 = i_min - 1 and N~_k is the
/// first m past N~_{k-1} at which the bilinear block or an intermediate product
/// split reaches lambda/4.
AdaptedStoppingTime build_adapted(const ScaleFamily& f, const ScaleFamily& g, double lambda);

struct SqueezeViolation {
  std::size_t sample = 0;
  std::size_t k = 0;
  int from = 0;  // N_{k-1}
  int to = 0;    // N_k
  double block = 0.0;
};

struct SqueezeReport {
  std::size_t windows_checked = 0;  // windows with |S| > lambda
  std::vector<SqueezeViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// For each window (N_{k-1}, N_k] of `arbitrary` whose bilinear block exceeds
/// lambda, checks that some adapted stop lands in the window.
SqueezeReport verify_squeeze(const StoppingTime& arbitrary, const BlockSumTable& table,
                             const AdaptedStoppingTime& adapted, double lambda);

/// Max over samples x and k of |sum_{N_{k-1}<i<j<=N_k} f_i g_j (x) -
/// sum_{i<j} Delta_i Pi_T f(x) Delta_j Pi_T g(x)|, T the tree topped at the
/// interval of length 2^-N_{k-1}(x) containing x.
double stopping_block_identity(const StoppingTime& times, const ScaleFamily& f,
                               const ScaleFamily& g);

/// Number of Product/Both stops per sample.
std::vector<std::size_t> product_stop_counts(const AdaptedStoppingTime& adapted);

}  // namespace paravar
