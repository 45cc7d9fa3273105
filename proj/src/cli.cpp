#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "paravar/blocksum.hpp"
#include "paravar/cli.hpp"
#include "paravar/haar.hpp"
#include "paravar/spectral.hpp"
#include "paravar/variation.hpp"
#include "paravar/verify.hpp"

namespace paravar::cli {

namespace {

using nlohmann::json;

struct GenOptions {
  std::uint64_t seed = 0;
  int level = 8;
  std::string kind = "signal";
  std::string distribution = "gaussian";
  double amplitude = 1.0;
  int atoms = 4;
  int i_min = 1;
  int i_max = 0;  // 0 picks the largest admissible scale
  int bandwidth = 1;
  std::string out;
};

struct TransformOptions {
  std::string input;
  std::string to = "haar";
  int i_min = 1;
  int i_max = 0;
  int bandwidth = 1;
  std::string out;
};

struct VariationOptions {
  std::vector<std::string> inputs;
  double t = 2.0;
  bool linear = false;
  bool bilinear = false;
  int multilinear = 0;
  std::optional<double> p;
  std::optional<double> q;
  bool witness = false;
};

struct JumpOptions {
  std::vector<std::string> inputs;
  double lambda = 1.0;
  std::optional<double> t;
  bool bilinear = false;
};

struct ParaproductOptions {
  std::string f;
  std::string g;
  bool maximal = false;
  bool continuous = false;
  int bandwidth = 1;
  int i_min = 1;
  int i_max = 0;
  std::string out;
};

struct VerifyOptions {
  std::string suite = "identities";
  std::string config;
  std::uint64_t seed = 0;
  std::optional<std::size_t> trials;
  std::string out;
  bool timing = false;
  bool inject = false;
};

struct ReportOptions {
  std::vector<std::string> inputs;
  std::string out;
};

// Writes to `path`, or to `fallback` when path is empty.
template <typename Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& write) {
  if (path.empty()) {
    write(fallback);
    return;
  }
  std::ofstream file(path);
  if (!file) throw std::invalid_argument("cannot write '" + path + "'");
  write(file);
}

GeneratorSpec generator_spec(const GenOptions& o) {
  return {distribution_from_string(o.distribution), o.amplitude, o.atoms};
}

int cmd_gen(const GenOptions& o, std::ostream& out) {
  const GridSpec grid(o.level);
  const GeneratorSpec spec = generator_spec(o);
  SignalFile file{ScaleFamily(grid, 0, Flavor::Raw, {gen_signal(o.seed, grid, spec)}), o.seed, o.distribution};
  if (o.kind == "discrete" || o.kind == "raw") {
    const int i_max = o.i_max > 0 ? o.i_max : o.level;
    file.family = o.kind == "raw" ? gen_raw(o.seed, grid, o.i_min, i_max, spec)
                                  : gen_discrete(o.seed, grid, o.i_min, i_max, spec);
  } else if (o.kind == "continuous") {
    const int i_max = o.i_max > 0 ? o.i_max : o.level - 1 - o.bandwidth;
    file.family = gen_continuous(o.seed, grid, o.i_min, i_max, make_profile(ProfileKind::Bandpass, o.bandwidth), spec);
  } else if (o.kind != "signal") {
    throw std::invalid_argument("unknown --kind '" + o.kind + "'");
  }
  emit(o.out, out, [&](std::ostream& s) { write_signal_file(s, file); });
  return kExitOk;
}

int cmd_transform(const TransformOptions& o, std::ostream& out) {
  const SignalFile input = load_signal_file(o.input);
  const DyadicSignal f = as_signal(input);
  const int level = f.grid().level();
  SignalFile file{ScaleFamily(f.grid(), 0, Flavor::Raw, {f}), input.seed, input.generator};
  if (o.to == "haar") {
    file.family = make_discrete_family(f, o.i_min, o.i_max > 0 ? o.i_max : level);
  } else if (o.to == "spectral") {
    file.family = make_continuous_family(f, make_profile(ProfileKind::Bandpass, o.bandwidth), o.i_min,
                                         o.i_max > 0 ? o.i_max : level - 1 - o.bandwidth);
  } else {
    throw std::invalid_argument("unknown --to '" + o.to + "'");
  }
  emit(o.out, out, [&](std::ostream& s) { write_signal_file(s, file); });
  return kExitOk;
}

std::vector<ScaleFamily> load_families(const std::vector<std::string>& paths) {
  std::vector<ScaleFamily> families;
  for (const auto& path : paths) families.push_back(load_signal_file(path).family);
  for (const auto& f : families) require_compatible(families.front(), f);
  return families;
}

// Factor list of the requested degree, cycling through the inputs.
std::vector<ScaleFamily> factors_of(const std::vector<ScaleFamily>& families, int degree) {
  std::vector<ScaleFamily> out;
  for (int m = 0; m < degree; ++m) out.push_back(families[static_cast<std::size_t>(m) % families.size()]);
  return out;
}

int cmd_variation(const VariationOptions& o, std::ostream& out) {
  if (static_cast<int>(o.linear) + static_cast<int>(o.bilinear) + static_cast<int>(o.multilinear > 0) > 1) {
    throw std::invalid_argument("choose one of --linear, --bilinear, --multilinear");
  }
  const int degree = o.multilinear > 0 ? o.multilinear : (o.bilinear ? 2 : 1);
  const std::vector<ScaleFamily> factors = factors_of(load_families(o.inputs), degree);
  const BlockSumTable table = BlockSumTable::build(factors);
  std::vector<double> values(table.samples());
  for (std::size_t x = 0; x < values.size(); ++x) {
    const BlockValues blocks = table.multilinear_values(x, degree);
    if (o.witness) {
      const VariationWitness w = variation_dp(blocks, o.t);
      values[x] = w.value;
      out << x << ' ' << format_number(w.value);
      for (int b : w.breakpoints) out << ' ' << b;
      out << '\n';
    } else {
      values[x] = variation_value(blocks, o.t);
    }
  }
  if (o.p) {
    // Outer exponent from Hoelder: 1/u = sum over factors of 1/p_m, p_m cycling (p, q).
    double inverse = 0.0;
    for (int m = 0; m < degree; ++m) inverse += 1.0 / (m % 2 == 0 ? *o.p : o.q.value_or(*o.p));
    out << "norm " << format_number(lp_norm(DyadicSignal(table.grid(), values), 1.0 / inverse)) << '\n';
  } else if (!o.witness) {
    for (std::size_t x = 0; x < values.size(); ++x) out << x << ' ' << format_number(values[x]) << '\n';
  }
  return kExitOk;
}

int cmd_jumps(const JumpOptions& o, std::ostream& out) {
  const int degree = o.bilinear ? 2 : 1;
  const BlockSumTable table = BlockSumTable::build(factors_of(load_families(o.inputs), degree));
  std::size_t largest = 0;
  for (std::size_t x = 0; x < table.samples(); ++x) {
    const JumpWitness jumps = jump_count(table.multilinear_values(x, degree), o.lambda);
    largest = std::max(largest, jumps.count);
    out << x << ' ' << jumps.count;
    if (o.t) out << ' ' << format_number(weak_functional(jumps, *o.t));
    out << '\n';
  }
  out << "max_count " << largest << '\n';
  return kExitOk;
}

int cmd_paraproduct(const ParaproductOptions& o, std::ostream& out) {
  const SignalFile fin = load_signal_file(o.f);
  const DyadicSignal f = as_signal(fin);
  const DyadicSignal g = as_signal(load_signal_file(o.g));
  const int level = f.grid().level();
  FamilySource source = DiscreteSource{};
  if (o.continuous) {
    source = ContinuousSource{make_profile(ProfileKind::Bandpass, o.bandwidth), o.i_min,
                              o.i_max > 0 ? o.i_max : level - 1 - o.bandwidth};
  }
  const DyadicSignal result = o.maximal ? maximal_paraproduct(f, g, source) : paraproduct(f, g, source);
  if (!o.out.empty()) {
    save_signal_file(o.out, {ScaleFamily(result.grid(), 0, Flavor::Raw, {result}), std::nullopt, std::nullopt});
    return kExitOk;
  }
  for (std::size_t x = 0; x < result.size(); ++x) out << x << ' ' << format_number(result[x]) << '\n';
  return kExitOk;
}

// JSON config: {"configs": [...], "panel": {...}}; both optional.
std::vector<ExperimentConfig> parse_configs(const json& doc, const VerifyOptions& o) {
  std::vector<ExperimentConfig> configs;
  auto generator_of = [](const json& j) {
    GeneratorSpec spec;
    spec.distribution = distribution_from_string(j.value("generator", std::string("gaussian")));
    spec.amplitude = j.value("amplitude", 1.0);
    spec.atoms = j.value("atoms", 4);
    return spec;
  };
  if (doc.contains("configs")) {
    for (const json& j : doc.at("configs")) {
      ExperimentConfig c;
      c.id = j.at("id").get<std::string>();
      c.exponents = {j.value("p", 2.0), j.value("q", 2.0), j.value("r", 2.0), j.value("s", 2.0), j.value("t", 1.0)};
      c.grid_level = j.value("grid_level", 8);
      c.flavor = flavor_from_string(j.value("flavor", std::string("discrete")));
      c.generator = generator_of(j);
      c.trials = j.value("trials", std::size_t{200});
      c.seed = j.value("seed", o.seed);
      c.lambdas = j.value("lambdas", std::vector<double>{});
      c.windows = window_policy_from_string(j.value("windows", std::string("dyadic")));
      c.bandwidth = j.value("bandwidth", 1);
      configs.push_back(std::move(c));
    }
  }
  if (doc.contains("panel")) {
    const json& panel = doc.at("panel");
    const auto ids = panel.at("ids").get<std::vector<std::string>>();
    const auto levels = panel.value("levels", std::vector<int>{8});
    const auto generators = panel.value("generators", std::vector<std::string>{"gaussian"});
    const auto trials = panel.value("trials", std::size_t{200});
    for (const auto& name : generators) {
      GeneratorSpec spec;
      spec.distribution = distribution_from_string(name);
      for (int level : levels) {
        for (auto& c : default_panel(ids, level, trials, o.seed, spec)) configs.push_back(std::move(c));
      }
    }
  }
  if (o.trials) {
    for (auto& c : configs) c.trials = *o.trials;
  }
  return configs;
}

std::vector<ExperimentConfig> default_constants(const VerifyOptions& o) {
  const json doc = {{"panel",
                     {{"ids",
                       {"strong", "weak", "bistrong", "biweak", "nonband-strong", "nonband-weak", "maxpara",
                        "prop1", "multilinear", "diag-weak", "bootstrap"}},
                      {"levels", {6}},
                      {"generators", {"gaussian", "lacunary"}},
                      {"trials", 20}}}};
  return parse_configs(doc, o);
}

const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

int cmd_verify(const VerifyOptions& o, std::ostream& out) {
  const std::vector<std::string> known = {"identities", "stopping", "cz", "spectral", "constants", "all"};
  if (std::find(known.begin(), known.end(), o.suite) == known.end()) {
    throw std::invalid_argument("unknown --suite '" + o.suite + "'");
  }
  auto wants = [&](std::string_view name) { return o.suite == name || o.suite == "all"; };

  std::vector<ExperimentConfig> configs;
  if (wants("constants")) {
    if (o.config.empty()) {
      configs = default_constants(o);
    } else {
      std::ifstream in(o.config);
      if (!in) throw std::invalid_argument("cannot read '" + o.config + "'");
      json doc;
      try {
        doc = json::parse(in);
      } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
      }
      configs = parse_configs(doc, o);
    }
    for (const auto& c : configs) validate_config(c);
  }

  bool ok = true;
  if (wants("identities")) {
    IdentityOptions options;
    options.seed = o.seed;
    options.trials = o.trials.value_or(options.trials);
    options.inject_prefix_sign_error = o.inject;
    const IdentityReport report = run_identities(options);
    out << "identities: " << verdict(report.ok()) << '\n';
    print_identities(out, report);
    ok = ok && report.ok();
  }
  if (wants("stopping")) {
    const StoppingSuiteReport r = run_stopping_suite(o.seed, o.trials.value_or(1000));
    out << "stopping: " << verdict(r.ok()) << " trials=" << r.trials << " not_stopping_times=" << r.not_stopping_times
        << " squeeze_windows=" << r.squeeze_windows << " squeeze_violations=" << r.squeeze_violations
        << " minimality_failures=" << r.minimality_failures << " accounting_failures=" << r.accounting_failures
        << '\n';
    ok = ok && r.ok();
  }
  if (wants("cz")) {
    const CZSuiteReport r = run_cz_suite(o.seed, o.trials.value_or(300));
    out << "cz: " << verdict(r.ok()) << " trials=" << r.trials << " reconstruction=" << format_number(r.max_reconstruction)
        << " mean=" << format_number(r.max_mean) << " height_ratio=" << format_number(r.max_height_ratio)
        << " exceptional_ratio=" << format_number(r.max_exceptional_ratio)
        << " good_norm_ratio=" << format_number(r.max_good_norm_ratio) << " intervals=" << r.selected_intervals
        << '\n';
    ok = ok && r.ok();
  }
  if (wants("spectral")) {
    const SpectralSuiteReport r = run_spectral_suite(o.seed, o.trials.value_or(100), o.trials.value_or(200));
    out << "spectral: " << verdict(r.ok()) << " families=" << r.families
        << " bandwidth_failures=" << r.bandwidth_failures << " out_of_band=" << format_number(r.max_out_of_band)
        << " signals=" << r.signals << " fefferman_stein_ratio=" << format_number(r.max_fefferman_stein_ratio)
        << " fefferman_stein_violations=" << r.fefferman_stein_violations
        << " constant_jsw=" << format_number(r.max_constant_jsw) << '\n';
    ok = ok && r.ok();
  }
  if (wants("constants")) {
    const std::vector<ReportRow> rows = estimate_constants(configs, o.timing);
    emit(o.out, out, [&](std::ostream& s) { write_csv(s, rows); });
  }
  return ok ? kExitOk : kExitSuiteFailure;
}

int cmd_report(const ReportOptions& o, std::ostream& out) {
  std::vector<std::string> lines;
  for (const auto& path : o.inputs) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != kReportHeader) {
      throw std::invalid_argument("'" + path + "' does not start with the report header");
    }
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (std::count(line.begin(), line.end(), ',') != std::count(kReportHeader.begin(), kReportHeader.end(), ',')) {
        throw std::invalid_argument("'" + path + "': row has the wrong number of columns");
      }
      if (std::find(lines.begin(), lines.end(), line) == lines.end()) lines.push_back(line);
    }
  }
  emit(o.out, out, [&](std::ostream& s) {
    s << kReportHeader << '\n';
    for (const auto& line : lines) s << line << '\n';
  });
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variational paraproduct toolkit on periodic dyadic grids", "paravar"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Write a random signal or scale family");
  gen_cmd->add_option("--seed", gen.seed)->required();
  gen_cmd->add_option("--level", gen.level);
  gen_cmd->add_option("--kind", gen.kind, "signal | discrete | continuous | raw");
  gen_cmd->add_option("--distribution", gen.distribution, "gaussian | rademacher | sparse | lacunary");
  gen_cmd->add_option("--amplitude", gen.amplitude);
  gen_cmd->add_option("--atoms", gen.atoms);
  gen_cmd->add_option("--i-min", gen.i_min);
  gen_cmd->add_option("--i-max", gen.i_max);
  gen_cmd->add_option("--bandwidth", gen.bandwidth);
  gen_cmd->add_option("--out", gen.out);

  TransformOptions transform;
  auto* transform_cmd = app.add_subcommand("transform", "Haar or spectral family of a plain signal");
  transform_cmd->add_option("--input", transform.input)->required();
  transform_cmd->add_option("--to", transform.to, "haar | spectral");
  transform_cmd->add_option("--i-min", transform.i_min);
  transform_cmd->add_option("--i-max", transform.i_max);
  transform_cmd->add_option("--bandwidth", transform.bandwidth);
  transform_cmd->add_option("--out", transform.out);

  VariationOptions variation;
  auto* variation_cmd = app.add_subcommand("variation", "Per-sample or normed t-variation");
  variation_cmd->add_option("--input", variation.inputs, "family files; factors cycle through them")->required();
  variation_cmd->add_option("--t", variation.t)->required();
  variation_cmd->add_flag("--linear", variation.linear);
  variation_cmd->add_flag("--bilinear", variation.bilinear);
  variation_cmd->add_option("--multilinear", variation.multilinear, "degree M");
  variation_cmd->add_option("--p", variation.p);
  variation_cmd->add_option("--q", variation.q);
  variation_cmd->add_flag("--witness", variation.witness, "print optimal breakpoints");

  JumpOptions jumps;
  auto* jumps_cmd = app.add_subcommand("jumps", "Per-sample lambda-jump counts");
  jumps_cmd->add_option("--input", jumps.inputs)->required();
  jumps_cmd->add_option("--lambda", jumps.lambda)->required();
  jumps_cmd->add_option("--t", jumps.t);
  jumps_cmd->add_flag("--bilinear", jumps.bilinear);

  ParaproductOptions para;
  auto* para_cmd = app.add_subcommand("paraproduct", "Paraproduct of two plain signals");
  para_cmd->add_option("--f", para.f)->required();
  para_cmd->add_option("--g", para.g)->required();
  para_cmd->add_flag("--maximal", para.maximal);
  para_cmd->add_flag("--continuous", para.continuous);
  para_cmd->add_option("--bandwidth", para.bandwidth);
  para_cmd->add_option("--i-min", para.i_min);
  para_cmd->add_option("--i-max", para.i_max);
  para_cmd->add_option("--out", para.out);

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run identity suites and constant sweeps");
  verify_cmd->add_option("--suite", verify.suite, "identities | stopping | cz | spectral | constants | all");
  verify_cmd->add_option("--config", verify.config, "JSON experiment configs");
  verify_cmd->add_option("--seed", verify.seed);
  verify_cmd->add_option("--trials", verify.trials);
  verify_cmd->add_option("--out", verify.out, "CSV report path");
  verify_cmd->add_flag("--timing", verify.timing, "record runtime_ms (breaks byte-identical reports)");
  verify_cmd->add_flag("--inject-prefix-sign-error", verify.inject);

  ReportOptions report;
  auto* report_cmd = app.add_subcommand("report", "Merge CSV reports");
  report_cmd->add_option("inputs", report.inputs)->required();
  report_cmd->add_option("--out", report.out);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen, out);
    if (*transform_cmd) return cmd_transform(transform, out);
    if (*variation_cmd) return cmd_variation(variation, out);
    if (*jumps_cmd) return cmd_jumps(jumps, out);
    if (*para_cmd) return cmd_paraproduct(para, out);
    if (*verify_cmd) return cmd_verify(verify, out);
    if (*report_cmd) return cmd_report(report, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace paravar::cli
