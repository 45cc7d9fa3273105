#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

#include "paravar/verify.hpp"

namespace paravar {

const char* to_string(Distribution distribution) {
  switch (distribution) {
    case Distribution::Gaussian:
      return "gaussian";
    case Distribution::Rademacher:
      return "rademacher";
    case Distribution::Sparse:
      return "sparse";
    case Distribution::Lacunary:
      return "lacunary";
  }
  return "?";
}

Distribution distribution_from_string(std::string_view name) {
  if (name == "gaussian") return Distribution::Gaussian;
  if (name == "rademacher") return Distribution::Rademacher;
  if (name == "sparse") return Distribution::Sparse;
  if (name == "lacunary") return Distribution::Lacunary;
  throw std::invalid_argument("unknown distribution '" + std::string(name) + "'");
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

HaarCoefficients gen_coefficients(std::uint64_t seed, GridSpec grid, int i_min, int i_max,
                                  const GeneratorSpec& spec) {
  if (i_min < 1 || i_max > grid.level() || i_min > i_max) {
    throw std::out_of_range("scale range outside [1, L]");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  HaarCoefficients out{grid, 0.0, {}};
  for (int l = 0; l < grid.level(); ++l) out.detail.emplace_back(std::size_t{1} << l, 0.0);
  if (spec.distribution == Distribution::Sparse) {
    std::size_t total = 0;
    for (int l = i_min - 1; l < i_max; ++l) total += std::size_t{1} << l;
    std::uniform_int_distribution<std::size_t> pick(0, total - 1);
    for (int k = 0; k < spec.atoms; ++k) {
      std::size_t index = pick(rng);
      int l = i_min - 1;
      while (index >= (std::size_t{1} << l)) index -= std::size_t{1} << l++;
      out.detail[static_cast<std::size_t>(l)][index] = spec.amplitude * normal(rng);
    }
    return out;
  }
  for (int l = i_min - 1; l < i_max; ++l) {
    const double sign = (l + 1) % 2 == 0 ? 1.0 : -1.0;
    for (double& c : out.detail[static_cast<std::size_t>(l)]) {
      switch (spec.distribution) {
        case Distribution::Gaussian:
          c = normal(rng);
          break;
        case Distribution::Rademacher:
          c = (rng() >> 63) ? 1.0 : -1.0;
          break;
        case Distribution::Lacunary:
          c = sign * std::abs(normal(rng));
          break;
        case Distribution::Sparse:
          break;
      }
      c *= spec.amplitude;
    }
  }
  return out;
}

ScaleFamily gen_discrete(std::uint64_t seed, GridSpec grid, int i_min, int i_max,
                         const GeneratorSpec& spec) {
  const HaarCoefficients coefficients = gen_coefficients(seed, grid, i_min, i_max, spec);
  return discrete_family_from_coefficients(grid, i_min, i_max, [&](int scale, std::size_t a) {
    return coefficients.detail[static_cast<std::size_t>(scale)][a];
  });
}

DyadicSignal gen_signal(std::uint64_t seed, GridSpec grid, const GeneratorSpec& spec) {
  return haar_synthesize(gen_coefficients(seed, grid, 1, grid.level(), spec));
}

ScaleFamily gen_continuous(std::uint64_t seed, GridSpec grid, int i_min, int i_max,
                           const BandProfile& profile, const GeneratorSpec& spec) {
  return make_continuous_family(gen_signal(seed, grid, spec), profile, i_min, i_max);
}

ScaleFamily gen_raw(std::uint64_t seed, GridSpec grid, int i_min, int i_max,
                    const GeneratorSpec& spec) {
  const ScaleFamily discrete = gen_discrete(seed, grid, i_min, i_max, spec);
  return ScaleFamily(grid, i_min, Flavor::Raw, discrete.components());
}

StoppingTime random_stopping_time(std::uint64_t seed, GridSpec grid, int lo, int hi,
                                  double density) {
  if (lo < 0 || hi > grid.level() || lo > hi) throw std::out_of_range("stop range outside [0, L]");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(density);
  std::vector<std::vector<bool>> marked;
  for (int s = 0; s <= grid.level(); ++s) {
    std::vector<bool> row(std::size_t{1} << s, s == lo || s == hi);
    if (s > lo && s < hi) {
      for (std::size_t a = 0; a < row.size(); ++a) row[a] = coin(rng);
    }
    marked.push_back(std::move(row));
  }
  StoppingTime out{grid, std::vector<std::vector<int>>(grid.size())};
  for (std::size_t x = 0; x < grid.size(); ++x) {
    for (int s = lo; s <= hi; ++s) {
      if (marked[static_cast<std::size_t>(s)][x >> (grid.level() - s)]) out.sequences[x].push_back(s);
    }
  }
  return out;
}

StoppingTime random_sequences(std::uint64_t seed, GridSpec grid, int lo, int hi, double density) {
  if (lo < 0 || hi > grid.level() || lo > hi) throw std::out_of_range("stop range outside [0, L]");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(density);
  StoppingTime out{grid, std::vector<std::vector<int>>(grid.size())};
  for (auto& seq : out.sequences) {
    seq.push_back(lo);
    for (int s = lo + 1; s < hi; ++s) {
      if (coin(rng)) seq.push_back(s);
    }
    if (hi > lo) seq.push_back(hi);
  }
  return out;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mutex;
  std::exception_ptr failure;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        try {
          for (std::size_t k = next++; k < count; k = next++) fn(k);
        } catch (...) {
          std::lock_guard lock(mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace paravar
