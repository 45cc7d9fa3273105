#include "paravar/stopping.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "paravar/blocksum.hpp"
#include "paravar/haar.hpp"
#include "paravar/tree.hpp"

namespace paravar {

bool is_stopping_time(const StoppingTime& times) {
  const GridSpec& grid = times.grid;
  const std::size_t n = grid.size();
  const int level = grid.level();
  if (times.sequences.size() != n) return false;
  std::size_t depth = 0;
  for (const auto& seq : times.sequences) {
    for (std::size_t k = 0; k < seq.size(); ++k) {
      if (seq[k] < 0 || seq[k] > level) return false;
      if (k > 0 && seq[k] <= seq[k - 1]) return false;
    }
    depth = std::max(depth, seq.size());
  }
  // For each k, block min/max pyramids of N_k (missing entries become -1,
  // which never equals a valid scale).
  std::vector<int> lo(n);
  std::vector<int> hi(n);
  for (std::size_t k = 0; k < depth; ++k) {
    std::vector<std::vector<int>> mins(static_cast<std::size_t>(level + 1));
    std::vector<std::vector<int>> maxs(static_cast<std::size_t>(level + 1));
    auto& finest_min = mins[static_cast<std::size_t>(level)];
    auto& finest_max = maxs[static_cast<std::size_t>(level)];
    finest_min.resize(n);
    finest_max.resize(n);
    for (std::size_t x = 0; x < n; ++x) {
      const auto& seq = times.sequences[x];
      const int value = k < seq.size() ? seq[k] : -1;
      finest_min[x] = value;
      finest_max[x] = value;
    }
    for (int s = level - 1; s >= 0; --s) {
      const auto& cmin = mins[static_cast<std::size_t>(s + 1)];
      const auto& cmax = maxs[static_cast<std::size_t>(s + 1)];
      auto& pmin = mins[static_cast<std::size_t>(s)];
      auto& pmax = maxs[static_cast<std::size_t>(s)];
      const std::size_t count = std::size_t{1} << s;
      pmin.resize(count);
      pmax.resize(count);
      for (std::size_t a = 0; a < count; ++a) {
        pmin[a] = std::min(cmin[2 * a], cmin[2 * a + 1]);
        pmax[a] = std::max(cmax[2 * a], cmax[2 * a + 1]);
      }
    }
    for (std::size_t x = 0; x < n; ++x) {
      const auto& seq = times.sequences[x];
      if (k >= seq.size()) continue;
      const int s = seq[k];
      const std::size_t a = x >> (level - s);
      if (mins[static_cast<std::size_t>(s)][a] != s || maxs[static_cast<std::size_t>(s)][a] != s) {
        return false;
      }
    }
  }
  return true;
}

const char* to_string(Trigger trigger) {
  switch (trigger) {
    case Trigger::Initial:
      return "initial";
    case Trigger::Bilinear:
      return "bilinear";
    case Trigger::Product:
      return "product";
    case Trigger::Both:
      return "both";
    case Trigger::Forced:
      return "forced";
    case Trigger::Exhausted:
      return "exhausted";
  }
  return "?";
}

namespace {

struct FirstTrigger {
  int stop = -1;  // local breakpoint, -1 if none
  Trigger kind = Trigger::Forced;
};

// First m in (a, scales] with |S(a, m]| >= threshold or
// sup_{a<m'<m} |F(a, m']| |G(m', m]| >= threshold.
FirstTrigger first_trigger(const BlockValues& bilinear, const BlockValues& fv,
                           const BlockValues& gv, int a, double threshold) {
  const int scales = bilinear.scale_count();
  for (int m = a + 1; m <= scales; ++m) {
    const bool one = std::abs(bilinear.get(a, m)) >= threshold;
    bool two = false;
    for (int split = a + 1; split < m && !two; ++split) {
      two = std::abs(fv.get(a, split)) * std::abs(gv.get(split, m)) >= threshold;
    }
    if (one || two) return {m, one && two ? Trigger::Both : (one ? Trigger::Bilinear : Trigger::Product)};
  }
  return {};
}

}  // namespace

AdaptedStoppingTime build_adapted(const ScaleFamily& f, const ScaleFamily& g, double lambda) {
  if (f.flavor() != Flavor::Discrete || g.flavor() != Flavor::Discrete) {
    throw std::invalid_argument("adapted stopping times need discrete families");
  }
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  require_compatible(f, g);
  const GridSpec& grid = f.grid();
  const std::size_t n = grid.size();
  const int level = grid.level();
  const int base = f.i_min() - 1;  // global scale of local breakpoint 0
  const int scales = f.scale_count();
  const double threshold = lambda / 4.0;
  const BlockSumTable table = BlockSumTable::build(f, g, 2);

  AdaptedStoppingTime out;
  out.lambda = lambda;
  out.times.grid = grid;
  out.times.sequences.assign(n, {base});
  out.triggers.assign(n, {Trigger::Initial});

  std::vector<BlockValues> bilinear;
  std::vector<BlockValues> fv;
  std::vector<BlockValues> gv;
  bilinear.reserve(n);
  for (std::size_t x = 0; x < n; ++x) {
    bilinear.push_back(table.bilinear_values(x));
    fv.push_back(table.linear_values(x, 0));
    gv.push_back(table.linear_values(x, 1));
  }

  std::vector<int> current(n, 0);  // local breakpoint of the latest stop
  std::vector<FirstTrigger> pending(n);
  for (bool active = true; active;) {
    active = false;
    // Tops at this stage: the interval at scale base + current[x] containing x.
    std::unordered_map<std::size_t, bool> top_triggers;
    auto top_key = [&](std::size_t x) {
      const int s = base + current[x];
      return (static_cast<std::size_t>(s) << 32) | (x >> (level - s));
    };
    for (std::size_t x = 0; x < n; ++x) {
      if (current[x] >= scales) continue;
      pending[x] = first_trigger(bilinear[x], fv[x], gv[x], current[x], threshold);
      top_triggers[top_key(x)] |= pending[x].stop >= 0;
    }
    for (std::size_t x = 0; x < n; ++x) {
      if (current[x] >= scales) continue;
      active = true;
      int next = 0;
      Trigger kind = pending[x].kind;
      if (!top_triggers[top_key(x)]) {
        next = current[x] + 1;
        kind = Trigger::Forced;
      } else if (pending[x].stop >= 0) {
        next = pending[x].stop;
      } else {
        next = scales;
        kind = Trigger::Exhausted;
      }
      current[x] = next;
      out.times.sequences[x].push_back(base + next);
      out.triggers[x].push_back(kind);
    }
  }
  return out;
}

SqueezeReport verify_squeeze(const StoppingTime& arbitrary, const BlockSumTable& table,
                             const AdaptedStoppingTime& adapted, double lambda) {
  if (arbitrary.sequences.size() != table.samples() ||
      adapted.times.sequences.size() != table.samples()) {
    throw std::invalid_argument("stopping times and table disagree on the grid");
  }
  const int base = table.i_min() - 1;
  SqueezeReport report;
  for (std::size_t x = 0; x < table.samples(); ++x) {
    const auto& seq = arbitrary.sequences[x];
    const auto& stops = adapted.times.sequences[x];
    for (std::size_t k = 1; k < seq.size(); ++k) {
      const int a = std::clamp(seq[k - 1] - base, 0, table.scale_count());
      const int b = std::clamp(seq[k] - base, 0, table.scale_count());
      if (a >= b) continue;
      const double block = table.bilinear(x, a, b);
      if (!(std::abs(block) > lambda)) continue;
      ++report.windows_checked;
      const bool hit = std::any_of(stops.begin(), stops.end(),
                                   [&](int stop) { return seq[k - 1] < stop && stop <= seq[k]; });
      if (!hit) report.violations.push_back({x, k, seq[k - 1], seq[k], block});
    }
  }
  return report;
}

double stopping_block_identity(const StoppingTime& times, const ScaleFamily& f,
                               const ScaleFamily& g) {
  require_compatible(f, g);
  const GridSpec& grid = times.grid;
  const int level = grid.level();
  const TreeSet trees = trees_from_stopping_time(times);
  const DyadicSignal fs = family_sum(f);
  const DyadicSignal gs = family_sum(g);

  auto scale_value = [](const ScaleFamily& family, int i, std::size_t x) {
    return (i < family.i_min() || i > family.i_max()) ? 0.0 : family.component(i)[x];
  };

  double worst = 0.0;
  for (const Tree& tree : trees.trees) {
    const int top = tree.top.scale;
    const DyadicSignal pf = tree_project(fs, tree);
    const DyadicSignal pg = tree_project(gs, tree);
    std::vector<DyadicSignal> df;
    std::vector<DyadicSignal> dg;
    for (int i = 1; i <= level; ++i) {
      df.push_back(delta(pf, i));
      dg.push_back(delta(pg, i));
    }
    const std::size_t first = tree.top.first_sample(grid);
    for (std::size_t x = first; x < first + tree.top.sample_count(grid); ++x) {
      const auto& seq = times.sequences[x];
      const auto it = std::find(seq.begin(), seq.end(), top);
      if (it == seq.end() || it + 1 == seq.end()) continue;
      const int lo = *it;
      const int hi = *(it + 1);
      double lhs = 0.0;
      double running = 0.0;
      for (int j = lo + 1; j <= hi; ++j) {
        lhs += running * scale_value(g, j, x);
        running += scale_value(f, j, x);
      }
      double rhs = 0.0;
      running = 0.0;
      for (int j = 1; j <= level; ++j) {
        rhs += running * dg[static_cast<std::size_t>(j - 1)][x];
        running += df[static_cast<std::size_t>(j - 1)][x];
      }
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

std::vector<std::size_t> product_stop_counts(const AdaptedStoppingTime& adapted) {
  std::vector<std::size_t> out;
  out.reserve(adapted.triggers.size());
  for (const auto& kinds : adapted.triggers) {
    out.push_back(static_cast<std::size_t>(std::count_if(kinds.begin(), kinds.end(), [](Trigger t) {
      return t == Trigger::Product || t == Trigger::Both;
    })));
  }
  return out;
}

}  // namespace paravar
