#include "paravar/tree.hpp"

#include <stdexcept>

#include "paravar/haar.hpp"

namespace paravar {

const Tree& TreeSet::tree_with_top(const DyadicInterval& top) const {
  auto it = by_top.find(top);
  if (it == by_top.end()) throw std::out_of_range("no tree with the requested top");
  return trees[it->second];
}

TreeSet trees_from_stopping_time(const StoppingTime& times) {
  if (!is_stopping_time(times)) throw std::invalid_argument("not a stopping time");
  const GridSpec& grid = times.grid;
  TreeSet out;
  for (int scale = 0; scale <= grid.level(); ++scale) {
    for (std::size_t a = 0; a < (std::size_t{1} << scale); ++a) {
      const DyadicInterval interval{scale, a};
      const auto& seq = times.sequences[interval.first_sample(grid)];
      // Deepest stop at or above this scale; constancy makes the choice of
      // sample inside the interval irrelevant.
      int stop = -1;
      for (int n : seq) {
        if (n <= scale) stop = n;
      }
      if (stop < 0) continue;
      const DyadicInterval top = DyadicInterval::containing(grid, stop, interval.first_sample(grid));
      auto [it, inserted] = out.by_top.try_emplace(top, out.trees.size());
      if (inserted) out.trees.push_back(Tree{top, {}});
      out.trees[it->second].members.push_back(interval);
    }
  }
  return out;
}

DyadicSignal tree_project(const DyadicSignal& f, const Tree& tree) {
  const HaarCoefficients full = haar_analyze(f);
  HaarCoefficients kept{full.grid, 0.0, {}};
  kept.detail.resize(full.detail.size());
  for (std::size_t l = 0; l < full.detail.size(); ++l) kept.detail[l].assign(full.detail[l].size(), 0.0);
  for (const auto& member : tree.members) {
    if (member.scale >= f.grid().level()) continue;
    kept.detail[static_cast<std::size_t>(member.scale)][member.position] = full.coefficient(member);
  }
  return haar_synthesize(kept);
}

}  // namespace paravar
