#pragma once

#include <map>
#include <vector>

#include "paravar/grid.hpp"
#include "paravar/stopping.hpp"

namespace paravar {

/// Stopping region: the intervals contained in `top` but in no smaller tree
/// top. Members include `top` itself and may reach the sample scale L.
struct Tree {
  DyadicInterval top;
  std::vector<DyadicInterval> members;
};

struct TreeSet {
  std::vector<Tree> trees;
  std::map<DyadicInterval, std::size_t> by_top;

  const Tree& tree_with_top(const DyadicInterval& top) const;
};

/// Throws std::invalid_argument unless `times` is a stopping time.
TreeSet trees_from_stopping_time(const StoppingTime& times);

/// Projection onto the span of the Haar functions of the tree's intervals
/// (scales below L; sample-scale members carry no Haar function).
DyadicSignal tree_project(const DyadicSignal& f, const Tree& tree);

}  // namespace paravar
