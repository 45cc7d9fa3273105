#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include "paravar/blocksum.hpp"
#include "paravar/variation.hpp"
#include "paravar/verify.hpp"

namespace paravar {

namespace {

enum class Shape { Linear, Bilinear, Multilinear, MaxPara };

struct IdInfo {
  std::string_view id;
  Shape shape;
};

constexpr IdInfo kIds[] = {
    {"strong", Shape::Linear},          {"weak", Shape::Linear},
    {"bistrong", Shape::Bilinear},      {"biweak", Shape::Bilinear},
    {"nonband-strong", Shape::Bilinear}, {"nonband-weak", Shape::Bilinear},
    {"maxpara", Shape::MaxPara},        {"prop1", Shape::Bilinear},
    {"multilinear", Shape::Multilinear}, {"diag-weak", Shape::Bilinear},
    {"bootstrap", Shape::Bilinear},
};

const IdInfo& info(std::string_view id) {
  for (const auto& entry : kIds) {
    if (entry.id == id) return entry;
  }
  throw std::invalid_argument("unknown inequality id '" + std::string(id) + "'");
}

// Exponent comparisons tolerate the rounding of rs/(r+s).
bool same(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

bool weak_rows(const ExperimentConfig& config) {
  return is_weak_id(config.id) || (config.id == "prop1" && same(config.exponents.s, 2.0));
}

double multilinear_endpoint(const ExponentSet& e) { return 1.0 / (2.0 / e.r + 1.0 / e.s); }

double outer_exponent(const ExperimentConfig& config) {
  const ExponentSet& e = config.exponents;
  switch (info(config.id).shape) {
    case Shape::Linear:
      return e.p;
    case Shape::Multilinear:
      return 1.0 / (2.0 / e.p + 1.0 / e.q);
    case Shape::Bilinear:
    case Shape::MaxPara:
      return e.u();
  }
  return e.p;
}

std::vector<double> lambdas_of(const ExperimentConfig& config) {
  return config.lambdas.empty() ? lambda_grid() : config.lambdas;
}

// Configs evaluated on shared trial data.
using GroupKey = std::tuple<std::string, int, int, int, double, int, std::size_t, std::uint64_t, int>;

GroupKey group_key(const ExperimentConfig& c) {
  return {c.id,
          c.grid_level,
          static_cast<int>(c.flavor),
          static_cast<int>(c.generator.distribution),
          c.generator.amplitude,
          c.generator.atoms,
          c.trials,
          c.seed,
          c.bandwidth};
}

struct TrialData {
  std::vector<ScaleFamily> families;  // what the left-hand side sees
  std::vector<ScaleFamily> norms;     // what the right-hand side measures
  std::optional<DyadicSignal> f;
  std::optional<DyadicSignal> g;
};

ScaleFamily flavored(std::uint64_t seed, const ExperimentConfig& config, Flavor flavor) {
  const GridSpec grid(config.grid_level);
  const int level = grid.level();
  switch (flavor) {
    case Flavor::Discrete:
      return gen_discrete(seed, grid, 1, level, config.generator);
    case Flavor::Raw:
      return gen_raw(seed, grid, 1, level, config.generator);
    case Flavor::Continuous:
      return gen_continuous(seed, grid, 1, level - 1 - config.bandwidth,
                            make_profile(ProfileKind::Bandpass, config.bandwidth), config.generator);
  }
  throw std::logic_error("unhandled flavor");
}

TrialData make_trial(const ExperimentConfig& config, std::size_t trial) {
  const std::uint64_t seed = mix_seed(config.seed, trial);
  const GridSpec grid(config.grid_level);
  TrialData data;
  const std::string& id = config.id;
  if (id == "strong" || id == "weak") {
    data.families = {flavored(mix_seed(seed, 0), config, config.flavor)};
  } else if (id == "nonband-strong" || id == "nonband-weak") {
    const BandProfile profile = make_profile(ProfileKind::Bandpass, 1);
    data.norms = {gen_raw(mix_seed(seed, 0), grid, 1, grid.level(), config.generator),
                  gen_raw(mix_seed(seed, 1), grid, 1, grid.level(), config.generator)};
    data.families = {convolve_family(data.norms[0], profile), convolve_family(data.norms[1], profile)};
    return data;
  } else if (id == "prop1") {
    data.families = {gen_raw(mix_seed(seed, 0), grid, 1, grid.level(), config.generator),
                     gen_discrete(mix_seed(seed, 1), grid, 1, grid.level(), config.generator)};
  } else if (id == "multilinear") {
    for (std::uint64_t m = 0; m < 3; ++m) {
      data.families.push_back(make_discrete_family(gen_signal(mix_seed(seed, m), grid, config.generator), 1, grid.level()));
    }
  } else if (id == "maxpara") {
    data.f = gen_signal(mix_seed(seed, 0), grid, config.generator);
    data.g = gen_signal(mix_seed(seed, 1), grid, config.generator);
    data.families = {make_discrete_family(*data.f, 1, grid.level()),
                     make_discrete_family(*data.g, 1, grid.level())};
  } else {
    data.families = {flavored(mix_seed(seed, 0), config, config.flavor),
                     flavored(mix_seed(seed, 1), config, config.flavor)};
  }
  data.norms = data.families;
  return data;
}

double right_hand_side(const ExperimentConfig& config, const TrialData& data) {
  const ExponentSet& e = config.exponents;
  const auto& n = data.norms;
  const std::string& id = config.id;
  if (id == "strong" || id == "weak") return mixed_norm(n[0], e.p, e.r);
  if (id == "maxpara") return lp_norm(*data.f, e.p) * lp_norm(*data.g, e.q);
  if (id == "prop1") return mixed_norm(n[0], e.p, 1.0) * mixed_norm(n[1], e.q, e.s);
  if (id == "multilinear") {
    return mixed_norm(n[0], e.p, e.r) * mixed_norm(n[1], e.q, e.s) * mixed_norm(n[2], e.p, e.r);
  }
  return mixed_norm(n[0], e.p, e.r) * mixed_norm(n[1], e.q, e.s);
}

// Largest number of disjoint windows with |A| > lambda; jump_count without
// the witness.
std::size_t count_jumps(const BlockValues& values, double lambda, std::vector<std::size_t>& best) {
  const int scales = values.scale_count();
  best.assign(static_cast<std::size_t>(scales + 1), 0);
  for (int b = 1; b <= scales; ++b) {
    std::size_t top = best[static_cast<std::size_t>(b - 1)];
    for (int a = 0; a < b; ++a) {
      if (std::abs(values.get(a, b)) > lambda) top = std::max(top, best[static_cast<std::size_t>(a)] + 1);
    }
    best[static_cast<std::size_t>(b)] = top;
  }
  return best[static_cast<std::size_t>(scales)];
}

double outer_norm(const std::vector<double>& values, double p) {
  double acc = 0.0;
  for (double v : values) acc += std::pow(v, p);
  return std::pow(acc / static_cast<double>(values.size()), 1.0 / p);
}

struct GroupPlan {
  std::vector<std::size_t> members;  // indices into the config list
  std::vector<double> ts;            // union of strong exponents
  std::vector<double> lambdas;       // union of weak levels
};

// ratios[config][slot]: slot 0 for strong rows; per lambda then sup for weak
// rows. NaN marks a skipped trial.
std::vector<std::vector<double>> evaluate_trial(const std::vector<ExperimentConfig>& configs,
                                                const GroupPlan& plan, std::size_t trial) {
  const ExperimentConfig& head = configs[plan.members.front()];
  const TrialData data = make_trial(head, trial);
  const Shape shape = info(head.id).shape;
  if (head.id == "bootstrap") {
    // Ratio of the level-set domination itself, t0 = t.
    std::vector<std::vector<double>> out;
    for (std::size_t member : plan.members) {
      const ExponentSet& e = configs[member].exponents;
      const BootstrapReport report = bootstrap_check(data.families[0], data.families[1], e.endpoint_t(), e.t);
      out.push_back({report.max_ratio});
    }
    return out;
  }
  const BlockSumTable table = shape == Shape::Multilinear ? BlockSumTable::build(data.families)
                                                          : (shape == Shape::Linear
                                                                 ? BlockSumTable::build({data.families[0]})
                                                                 : BlockSumTable::build(data.families[0], data.families[1], 2));
  const std::size_t n = table.samples();

  std::vector<std::vector<double>> variation(plan.ts.size(), std::vector<double>(n));
  std::vector<std::vector<double>> counts(plan.lambdas.size(), std::vector<double>(n));
  std::vector<double> sup(n, 0.0);
  std::vector<std::size_t> scratch;
  for (std::size_t x = 0; x < n; ++x) {
    const BlockValues values = shape == Shape::Linear        ? table.linear_values(x)
                               : shape == Shape::Multilinear ? table.multilinear_values(x, 3)
                                                             : table.bilinear_values(x);
    for (std::size_t k = 0; k < plan.ts.size(); ++k) variation[k][x] = variation_value(values, plan.ts[k]);
    for (std::size_t k = 0; k < plan.lambdas.size(); ++k) {
      counts[k][x] = static_cast<double>(count_jumps(values, plan.lambdas[k], scratch));
    }
    if (shape == Shape::MaxPara) {
      for (int a = 0; a < values.scale_count(); ++a) {
        for (int b = a + 1; b <= values.scale_count(); ++b) sup[x] = std::max(sup[x], std::abs(values.get(a, b)));
      }
    }
  }

  std::vector<std::vector<double>> out;
  std::vector<double> column(n);
  for (std::size_t member : plan.members) {
    const ExperimentConfig& config = configs[member];
    const double rhs = right_hand_side(config, data);
    const double p = outer_exponent(config);
    const double t = config.exponents.t;
    const bool skip = !(rhs > 0.0) || !std::isfinite(rhs);
    if (!weak_rows(config)) {
      double lhs = 0.0;
      if (shape == Shape::MaxPara) {
        lhs = outer_norm(sup, p);
      } else {
        const auto k = static_cast<std::size_t>(
            std::find(plan.ts.begin(), plan.ts.end(), t) - plan.ts.begin());
        lhs = outer_norm(variation[k], p);
      }
      out.push_back({skip ? NAN : lhs / rhs});
      continue;
    }
    const std::vector<double> lambdas = lambdas_of(config);
    std::vector<double> ratios;
    double best = 0.0;
    for (double lambda : lambdas) {
      const auto k = static_cast<std::size_t>(
          std::find(plan.lambdas.begin(), plan.lambdas.end(), lambda) - plan.lambdas.begin());
      double ratio = 0.0;
      if (config.id == "diag-weak") {
        double total = 0.0;
        for (double c : counts[k]) total += c;
        ratio = std::pow(lambda, t) * total / static_cast<double>(n) / std::pow(rhs, t);
      } else {
        for (std::size_t x = 0; x < n; ++x) column[x] = lambda * std::pow(counts[k][x], 1.0 / t);
        ratio = outer_norm(column, p) / rhs;
      }
      ratios.push_back(skip ? NAN : ratio);
      best = std::max(best, ratio);
    }
    ratios.push_back(skip ? NAN : best);
    out.push_back(std::move(ratios));
  }
  return out;
}

}  // namespace

bool is_weak_id(std::string_view id) {
  return id == "weak" || id == "biweak" || id == "nonband-weak" || id == "diag-weak";
}

void validate_config(const ExperimentConfig& config) {
  const IdInfo& id = info(config.id);
  const ExponentSet& e = config.exponents;
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument(config.id + ": " + why);
  };
  if (config.grid_level < 3 || config.grid_level > 16) fail("grid_level must lie in [3, 16]");
  if (config.trials == 0) fail("trials must be positive");
  if (config.bandwidth < 1) fail("bandwidth must be positive");
  if (config.flavor == Flavor::Continuous && config.grid_level - 1 - config.bandwidth < 1) {
    fail("grid too coarse for the continuous bandwidth");
  }
  for (double lambda : config.lambdas) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) fail("lambdas must be positive");
  }
  if (!(e.p > 1.0 && std::isfinite(e.p))) fail("p must lie in (1, inf)");
  if (!(e.r >= 1.0 && e.r <= 2.0)) fail("r must lie in [1, 2]");
  if (!(e.t > 0.0)) fail("t must be positive");
  if (id.shape != Shape::Linear) {
    if (!(e.q > 1.0 && std::isfinite(e.q))) fail("q must lie in (1, inf)");
    if (!(e.s >= 1.0 && e.s <= 2.0)) fail("s must lie in [1, 2]");
  }
  const bool weak = is_weak_id(config.id);
  switch (id.shape) {
    case Shape::Linear:
      if (e.t < e.r && !same(e.t, e.r)) fail("t must be at least r");
      if (!weak && same(e.t, e.r) && same(e.r, 2.0)) fail("t = r = 2 is only weak type");
      break;
    case Shape::Bilinear: {
      const double endpoint = config.id == "prop1" ? e.s / (1.0 + e.s) : e.endpoint_t();
      if (config.id == "prop1") {
        if (!same(e.r, 1.0)) fail("r must be 1");
        if (!same(e.t, endpoint)) fail("t must equal s/(1+s)");
        break;
      }
      if (config.id == "bootstrap") {
        if (!(e.t > endpoint) || same(e.t, endpoint)) fail("t0 must exceed rs/(r+s)");
        break;
      }
      if (config.id == "diag-weak") {
        if (!same(e.p, e.r) || !same(e.q, e.s)) fail("diagonal needs p = r and q = s");
        if (!same(e.t, endpoint)) fail("t must equal rs/(r+s)");
        break;
      }
      if (e.t < endpoint && !same(e.t, endpoint)) fail("t must be at least rs/(r+s)");
      if (!weak && same(e.t, endpoint) && same(std::max(e.r, e.s), 2.0)) {
        fail("the endpoint with max(r, s) = 2 is only weak type");
      }
      break;
    }
    case Shape::Multilinear:
      if (!(e.t > multilinear_endpoint(e)) || same(e.t, multilinear_endpoint(e))) {
        fail("t must exceed 1/(2/r + 1/s)");
      }
      break;
    case Shape::MaxPara:
      break;
  }
}

std::vector<ReportRow> estimate_constants(const std::vector<ExperimentConfig>& configs, bool timing) {
  for (const auto& config : configs) validate_config(config);

  std::map<GroupKey, GroupPlan> groups;
  std::vector<GroupKey> order;
  for (std::size_t k = 0; k < configs.size(); ++k) {
    const GroupKey key = group_key(configs[k]);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    GroupPlan& plan = it->second;
    plan.members.push_back(k);
    if (weak_rows(configs[k])) {
      for (double lambda : lambdas_of(configs[k])) {
        if (std::find(plan.lambdas.begin(), plan.lambdas.end(), lambda) == plan.lambdas.end()) {
          plan.lambdas.push_back(lambda);
        }
      }
    } else if (std::find(plan.ts.begin(), plan.ts.end(), configs[k].exponents.t) == plan.ts.end()) {
      plan.ts.push_back(configs[k].exponents.t);
    }
  }

  std::vector<std::vector<ReportRow>> per_config(configs.size());
  for (const GroupKey& key : order) {
    const GroupPlan& plan = groups.at(key);
    const ExperimentConfig& head = configs[plan.members.front()];
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::vector<std::vector<double>>> trials(head.trials);
    parallel_for(head.trials, [&](std::size_t k) { trials[k] = evaluate_trial(configs, plan, k); });
    const double elapsed =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    for (std::size_t m = 0; m < plan.members.size(); ++m) {
      const ExperimentConfig& config = configs[plan.members[m]];
      const std::size_t slots = trials.front()[m].size();
      const std::vector<double> lambdas = weak_rows(config) ? lambdas_of(config) : std::vector<double>{};
      for (std::size_t slot = 0; slot < slots; ++slot) {
        ReportRow row;
        row.inequality_id = config.id;
        row.exponents = config.exponents;
        if (slot < lambdas.size()) row.lambda = lambdas[slot];
        row.lambda_sup = weak_rows(config) && slot == lambdas.size();
        row.grid_level = config.grid_level;
        row.trials = config.trials;
        row.seed = config.seed;
        row.generator = to_string(config.generator.distribution);
        double total = 0.0;
        std::size_t used = 0;
        for (const auto& trial : trials) {
          const double ratio = trial[m][slot];
          if (std::isnan(ratio)) {
            ++row.skipped;
            continue;
          }
          row.max_ratio = std::max(row.max_ratio, ratio);
          total += ratio;
          ++used;
        }
        row.mean_ratio = used > 0 ? total / static_cast<double>(used) : 0.0;
        row.runtime_ms = timing ? elapsed / static_cast<double>(plan.members.size()) : 0.0;
        per_config[plan.members[m]].push_back(std::move(row));
      }
    }
  }

  std::vector<ReportRow> rows;
  for (auto& block : per_config) {
    for (auto& row : block) rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ReportRow> estimate_constant(const ExperimentConfig& config, bool timing) {
  return estimate_constants({config}, timing);
}

std::vector<ExperimentConfig> default_panel(const std::vector<std::string>& ids, int grid_level,
                                            std::size_t trials, std::uint64_t seed,
                                            const GeneratorSpec& generator) {
  constexpr std::pair<double, double> outer[] = {{2.0, 2.0}, {3.0, 1.5}, {4.0, 4.0}};
  constexpr std::pair<double, double> inner[] = {{1.0, 1.0}, {1.0, 2.0}, {2.0, 2.0}, {1.5, 1.5}};
  constexpr double fixed_t[] = {1.0, 2.0, 3.0};

  std::vector<ExperimentConfig> out;
  auto add = [&](const std::string& id, ExponentSet e) {
    ExperimentConfig config;
    config.id = id;
    config.exponents = e;
    config.grid_level = grid_level;
    config.trials = trials;
    config.seed = seed;
    config.generator = generator;
    try {
      validate_config(config);
    } catch (const std::invalid_argument&) {
      return;
    }
    const bool duplicate = std::any_of(out.begin(), out.end(), [&](const ExperimentConfig& c) {
      return c.id == id && c.exponents.p == e.p && c.exponents.q == e.q && c.exponents.r == e.r &&
             c.exponents.s == e.s && c.exponents.t == e.t;
    });
    if (!duplicate) out.push_back(std::move(config));
  };

  for (const std::string& id : ids) {
    const Shape shape = info(id).shape;
    if (id == "bootstrap") {
      // Only t0 matters; the check does not read p, q, r, s.
      for (double t0 : {1.5, 2.0, 3.0}) add(id, {2.0, 2.0, 2.0, 2.0, t0});
      continue;
    }
    for (const auto& [p, q] : outer) {
      if (shape == Shape::MaxPara) {
        add(id, {p, q, 2.0, 2.0, 1.0});
        continue;
      }
      for (const auto& [r, s] : inner) {
        ExponentSet e{p, q, r, s, 1.0};
        if (id == "diag-weak") {
          e = {r, s, r, s, 0.0};
          e.t = e.endpoint_t();
          add(id, e);
          continue;
        }
        if (id == "prop1") {
          e.r = 1.0;
          e.t = s / (1.0 + s);
          add(id, e);
          continue;
        }
        const double endpoint = shape == Shape::Linear ? r : e.endpoint_t();
        if (is_weak_id(id)) {
          e.t = endpoint;
          add(id, e);
          continue;
        }
        if (shape == Shape::Linear) e.q = e.s = 2.0;
        if (shape != Shape::Multilinear) {
          e.t = endpoint;
          add(id, e);
        }
        for (double t : fixed_t) {
          e.t = t;
          add(id, e);
        }
      }
    }
  }
  return out;
}

std::vector<StabilityEntry> compare_levels(const std::vector<ReportRow>& rows, int coarse_level,
                                           int fine_level) {
  auto key = [](const ReportRow& row) {
    const ExponentSet& e = row.exponents;
    return row.inequality_id + " p=" + format_number(e.p) + " q=" + format_number(e.q) +
           " r=" + format_number(e.r) + " s=" + format_number(e.s) + " t=" + format_number(e.t) +
           " " + row.generator;
  };
  std::map<std::string, double> coarse;
  for (const auto& row : rows) {
    if (row.grid_level == coarse_level && !row.lambda) coarse[key(row)] = row.max_ratio;
  }
  std::vector<StabilityEntry> out;
  for (const auto& row : rows) {
    if (row.grid_level != fine_level || row.lambda) continue;
    const auto it = coarse.find(key(row));
    if (it != coarse.end()) out.push_back({it->first, it->second, row.max_ratio});
  }
  return out;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

void write_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << kReportHeader << '\n';
  for (const auto& row : rows) {
    const ExponentSet& e = row.exponents;
    out << row.inequality_id << ',' << format_number(e.p) << ',' << format_number(e.q) << ','
        << format_number(e.r) << ',' << format_number(e.s) << ',' << format_number(e.t) << ',';
    if (row.lambda) {
      out << format_number(*row.lambda);
    } else if (row.lambda_sup) {
      out << "sup";
    }
    out << ',' << row.grid_level << ',' << row.trials << ',' << row.seed << ','
        << format_number(row.max_ratio) << ',' << format_number(row.mean_ratio) << ','
        << row.skipped << ',' << format_number(row.runtime_ms) << '\n';
  }
}

}  // namespace paravar
