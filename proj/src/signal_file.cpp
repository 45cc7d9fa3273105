#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "paravar/cli.hpp"
#include "paravar/haar.hpp"
#include "paravar/spectral.hpp"
#include "paravar/verify.hpp"

namespace paravar {

namespace {

[[noreturn]] void malformed(const std::string& why) {
  throw std::invalid_argument("signal file: " + why);
}

template <typename T>
T parse_number(std::string_view token, std::string_view what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    malformed("bad " + std::string(what) + " '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

void write_signal_file(std::ostream& out, const SignalFile& file) {
  const ScaleFamily& f = file.family;
  out << kSignalFileMagic << '\n';
  out << "grid_level " << f.grid().level() << '\n';
  out << "flavor " << to_string(f.flavor()) << '\n';
  out << "i_min " << f.i_min() << '\n';
  out << "i_max " << f.i_max() << '\n';
  out << "bandwidth " << f.bandwidth() << '\n';
  if (file.seed) out << "seed " << *file.seed << '\n';
  if (file.generator) out << "generator " << *file.generator << '\n';
  for (int i = f.i_min(); i <= f.i_max(); ++i) {
    out << "component " << i;
    for (double v : f.component(i).values()) out << ' ' << format_number(v);
    out << '\n';
  }
}

SignalFile read_signal_file(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kSignalFileMagic) malformed("missing header line");
  std::optional<int> level;
  std::optional<Flavor> flavor;
  std::optional<int> i_min;
  std::optional<int> i_max;
  int bandwidth = 0;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> generator;
  std::vector<DyadicSignal> components;

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream tokens(line);
    std::string key;
    tokens >> key;
    std::string value;
    if (key != "component") {
      if (!(tokens >> value)) malformed("key '" + key + "' has no value");
      std::string extra;
      if (tokens >> extra) malformed("trailing data after '" + key + "'");
    }
    if (key == "grid_level") {
      level = parse_number<int>(value, "grid_level");
    } else if (key == "flavor") {
      flavor = flavor_from_string(value);
    } else if (key == "i_min") {
      i_min = parse_number<int>(value, "i_min");
    } else if (key == "i_max") {
      i_max = parse_number<int>(value, "i_max");
    } else if (key == "bandwidth") {
      bandwidth = parse_number<int>(value, "bandwidth");
    } else if (key == "seed") {
      seed = parse_number<std::uint64_t>(value, "seed");
    } else if (key == "generator") {
      generator = value;
    } else if (key == "component") {
      if (!level || !i_min || !i_max || !flavor) malformed("component before header");
      if (*level < 0 || *level > GridSpec::kMaxLevel) malformed("grid_level out of range");
      std::string index;
      tokens >> index;
      const int expected = *i_min + static_cast<int>(components.size());
      if (parse_number<int>(index, "component index") != expected) {
        malformed("components must be listed in scale order starting at i_min");
      }
      const GridSpec grid(*level);
      std::vector<double> values;
      values.reserve(grid.size());
      std::string token;
      while (tokens >> token) {
        const double v = parse_number<double>(token, "sample");
        if (!std::isfinite(v)) malformed("non-finite sample");
        values.push_back(v);
      }
      if (values.size() != grid.size()) {
        malformed("component " + index + " has " + std::to_string(values.size()) + " samples, expected " +
                  std::to_string(grid.size()));
      }
      components.emplace_back(grid, std::move(values));
    } else {
      malformed("unknown key '" + key + "'");
    }
  }
  if (!level || !flavor || !i_min || !i_max) malformed("incomplete header");
  if (*i_max < *i_min || static_cast<int>(components.size()) != *i_max - *i_min + 1) {
    malformed("expected " + std::to_string(*i_max - *i_min + 1) + " components");
  }
  SignalFile file{ScaleFamily(GridSpec(*level), *i_min, *flavor, std::move(components), bandwidth), seed,
                  generator};
  if (*flavor == Flavor::Discrete) validate_discrete(file.family);
  if (*flavor == Flavor::Continuous) {
    if (bandwidth < 1) malformed("continuous families need bandwidth >= 1");
    if (!bandwidth_check(file.family).ok) malformed("continuous family is not band-limited");
  }
  return file;
}

void save_signal_file(const std::string& path, const SignalFile& file) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write '" + path + "'");
  write_signal_file(out, file);
}

SignalFile load_signal_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read '" + path + "'");
  return read_signal_file(in);
}

DyadicSignal as_signal(const SignalFile& file) {
  if (file.family.scale_count() != 1 || file.family.flavor() != Flavor::Raw) {
    throw std::invalid_argument("expected a plain signal (raw flavor, one component)");
  }
  return file.family.at(0);
}

}  // namespace paravar
