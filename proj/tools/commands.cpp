#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "qcoin/circuit.hpp"
#include "qcoin/interference.hpp"
#include "qcoin/kernels.hpp"
#include "qcoin/markov.hpp"
#include "qcoin/quantum_model.hpp"
#include "qcoin/serialization.hpp"
#include "qcoin/tolerances.hpp"
#include "svg_plot.hpp"

namespace qcoin::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Implemented (not nominal) parameters of the complexity sweep experiment.
constexpr double kImplementedL = 0.397;
const std::vector<double> kImplementedM = {0.101, 0.197, 0.297, 0.391, 0.490,
                                           0.588, 0.685, 0.784, 0.882, 0.994};

std::vector<double> tenths() {
  std::vector<double> v;
  for (int i = 1; i <= 10; ++i) v.push_back(i / 10.0);
  return v;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ---- config access -------------------------------------------------------

double get_number(const json& cfg, const char* key, double fallback) {
  if (!cfg.contains(key)) return fallback;
  const auto& v = cfg.at(key);
  if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

double get_probability(const json& cfg, const char* key, double fallback) {
  const double p = get_number(cfg, key, fallback);
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigError(std::string("'") + key + "' must be a probability in [0, 1]");
  }
  return p;
}

int get_int(const json& cfg, const char* key, int fallback) {
  if (!cfg.contains(key)) return fallback;
  const auto& v = cfg.at(key);
  if (!v.is_number_integer()) throw ConfigError(std::string("'") + key + "' must be an integer");
  return v.get<int>();
}

std::vector<double> get_list(const json& cfg, const char* key, std::vector<double> fallback) {
  if (!cfg.contains(key)) return fallback;
  const auto& v = cfg.at(key);
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array() || v.empty()) {
    throw ConfigError(std::string("'") + key + "' must be a number or nonempty array");
  }
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(std::string("'") + key + "' entries must be numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<double> get_probability_list(const json& cfg, const char* key,
                                         std::vector<double> fallback) {
  auto v = get_list(cfg, key, std::move(fallback));
  for (double p : v) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ConfigError(std::string("'") + key + "' entries must lie in [0, 1]");
    }
  }
  return v;
}

CausalStateId get_start(const json& cfg, const char* key, CausalStateId fallback) {
  if (!cfg.contains(key)) return fallback;
  if (!cfg.at(key).is_string()) throw ConfigError(std::string("'") + key + "' must be S0 or S1");
  try {
    return parse_causal_state(cfg.at(key).get<std::string>());
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  }
}

int get_steps(const json& cfg, int max_steps) {
  const int steps = get_int(cfg, "steps", 3);
  if (steps < 1 || steps > max_steps) {
    throw ConfigError("'steps' must lie in [1, " + std::to_string(max_steps) + "]");
  }
  return steps;
}

ProcessWithStart get_process(const json& cfg, const char* key, const ProcessWithStart& fallback) {
  if (!cfg.contains(key)) return fallback;
  const auto& p = cfg.at(key);
  if (!p.is_object()) throw ConfigError(std::string("'") + key + "' must be an object");
  const double l = get_probability(p, "l", fallback.process.coin.l());
  const double m = get_probability(p, "m", fallback.process.coin.m());
  const std::string label = p.value("label", std::string(key));
  return {{PerturbedCoin(l, m), label}, get_start(p, "start", fallback.start)};
}

std::uint64_t require_seed(const json& cfg, const RunOptions& options) {
  if (options.seed) return *options.seed;
  if (cfg.contains("seed") && cfg.at("seed").is_number_unsigned()) {
    return cfg.at("seed").get<std::uint64_t>();
  }
  if (cfg.contains("seed")) throw ConfigError("'seed' must be an unsigned integer");
  throw ConfigError("this command is stochastic and needs a seed (config 'seed' or --seed)");
}

// ---- output --------------------------------------------------------------

void prepare_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw ConfigError("cannot create output directory " + dir.string());
  }
  const fs::path probe = dir / ".qcoin_write_probe";
  {
    std::ofstream f(probe);
    if (!f) throw ConfigError("output directory is not writable: " + dir.string());
  }
  fs::remove(probe, ec);
}

std::string header_block(std::string_view command, const std::string& hash) {
  std::ostringstream h;
  h << "# tool=qcoin " << kToolVersion << "\n";
  h << "# command=" << command << "\n";
  h << "# schema_version=" << kSchemaVersion << "\n";
  h << "# config_hash=" << hash << "\n";
  h << "# tolerances distribution_sum=" << kTol.distribution_sum
    << " amplitude_match=" << kTol.amplitude_match << " density_match=" << kTol.density_match
    << " identity_match=" << kTol.identity_match << " fit_exact=" << kTol.fit_exact << "\n";
  return h.str();
}

class CsvFile {
 public:
  CsvFile(std::string_view command, const std::string& hash, const std::string& columns)
      : text_(header_block(command, hash) + columns + "\n") {}

  void row(std::initializer_list<std::string> cells) {
    bool first = true;
    for (const auto& c : cells) {
      if (!first) text_ += ',';
      text_ += c;
      first = false;
    }
    text_ += '\n';
  }

  void write(const fs::path& path, CommandResult& result) const {
    std::ofstream out(path);
    out << text_;
    if (!out) throw ConfigError("failed to write " + path.string());
    result.files.push_back(path);
  }

 private:
  std::string text_;
};

void write_json(const fs::path& path, const json& j, CommandResult& result) {
  std::ofstream out(path);
  out << j.dump(2) << "\n";
  if (!out) throw ConfigError("failed to write " + path.string());
  result.files.push_back(path);
}

void write_plot(const fs::path& path, const PlotSpec& plot, CommandResult& result) {
  write_svg(path, plot);
  result.files.push_back(path);
}

json base_report(std::string_view command, const json& config, const std::string& hash) {
  return {{"schema_version", kSchemaVersion},
          {"tool_version", kToolVersion},
          {"command", command},
          {"config_hash", hash},
          {"config", config}};
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

// ---- oracle-check helpers ------------------------------------------------

struct CheckResult {
  std::string name;
  double max_abs_deviation = 0.0;
  double tolerance = 0.0;
  long evaluations = 0;

  bool passed() const { return max_abs_deviation <= tolerance; }
  json to_json() const {
    return {{"name", name},
            {"max_abs_deviation", max_abs_deviation},
            {"tolerance", tolerance},
            {"evaluations", evaluations},
            {"passed", passed()}};
  }
};

std::vector<double> grid_values(double step) {
  const int n = static_cast<int>(std::lround(1.0 / step));
  std::vector<double> v;
  for (int i = 0; i <= n; ++i) v.push_back(std::min(1.0, i / static_cast<double>(n)));
  return v;
}

}  // namespace

// ---- public helpers ------------------------------------------------------

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"futures",      "complexity-sweep", "hom-dip",
                                                 "compare-sweep", "oracle-check",     "counts"};
  return names;
}

json select_command_config(const json& file, std::string_view command) {
  if (!file.is_object()) throw ConfigError("config must be a JSON object");
  if (file.contains("schema_version") && file.at("schema_version") != kSchemaVersion) {
    throw ConfigError("unsupported config schema_version");
  }
  const std::string key(command);
  if (file.contains(key)) {
    if (!file.at(key).is_object()) throw ConfigError("'" + key + "' record must be an object");
    return file.at(key);
  }
  for (const auto& name : command_names()) {
    if (file.contains(name)) {
      throw ConfigError("config file has no '" + key + "' record");
    }
  }
  json bare = file;
  bare.erase("schema_version");
  return bare;
}

json load_config(const fs::path& path, std::string_view command) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  json file;
  try {
    in >> file;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return select_command_config(file, command);
}

std::string config_hash(const json& config) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

fs::path default_out_dir() {
  if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') return env;
  return "qcoin_out";
}

// ---- futures -------------------------------------------------------------

CommandResult cmd_futures(const json& config, const RunOptions& options) {
  const double l = get_probability(config, "l", 0.4);
  const auto ms = get_probability_list(config, "m", tenths());
  const int steps = get_steps(config, kMaxEnumerationSteps);
  std::vector<CausalStateId> starts;
  if (config.contains("starts")) {
    if (!config.at("starts").is_array() || config.at("starts").empty()) {
      throw ConfigError("'starts' must be a nonempty array");
    }
    for (const auto& s : config.at("starts")) {
      try {
        starts.push_back(parse_causal_state(s.get<std::string>()));
      } catch (const std::exception& e) {
        throw ConfigError(std::string("bad entry in 'starts': ") + e.what());
      }
    }
  } else {
    starts = {CausalStateId::S0, CausalStateId::S1};
  }

  json effective = {{"l", l}, {"m", ms}, {"steps", steps}};
  for (auto s : starts) effective["starts"].push_back(to_string(s));
  const std::string hash = config_hash(effective);
  prepare_out_dir(options.out_dir);

  CommandResult result;
  CsvFile csv("futures", hash, "start,l,m,bitstring,time_ns,probability");
  json distributions = json::array();
  double worst_sum_error = 0.0;
  for (auto start : starts) {
    PlotSpec plot{"Future outcome probabilities, start " + to_string(start) + ", l = " + num(l),
                  "m", "probability", {}};
    std::vector<PlotSeries> series(std::size_t{1} << steps);
    for (std::uint32_t x = 0; x < series.size(); ++x) {
      series[x].name = bitstring(x, steps);
      series[x].color = kPalette[x % 8];
    }
    for (double m : ms) {
      const PerturbedCoin coin(l, m);
      const auto dist = future_distribution(coin, start, steps);
      double sum = 0.0;
      for (std::uint32_t x = 0; x < dist.size(); ++x) {
        csv.row({to_string(start), num(l), num(m), bitstring(x, steps),
                 num(arrival_time_ns(x, steps)), num(dist[x])});
        sum += dist[x];
        series[x].x.push_back(m);
        series[x].y.push_back(dist[x]);
      }
      worst_sum_error = std::max(worst_sum_error, std::abs(sum - 1.0));
      json entry = to_json(dist);
      entry["start"] = to_string(start);
      entry["l"] = l;
      entry["m"] = m;
      distributions.push_back(entry);
    }
    if (steps <= 4) {
      plot.series = std::move(series);
      write_plot(options.out_dir / ("futures_" + to_string(start) + ".svg"), plot, result);
    }
  }
  csv.write(options.out_dir / "futures.csv", result);
  write_json(options.out_dir / "futures.json",
             {{"schema_version", kSchemaVersion}, {"distributions", distributions}}, result);

  const bool passed = worst_sum_error <= kTol.distribution_sum;
  result.report = base_report("futures", effective, hash);
  result.report["max_normalization_error"] = worst_sum_error;
  result.report["passed"] = passed;
  result.exit_code = passed ? kExitOk : kExitCheckFailed;
  return result;
}

// ---- complexity-sweep ----------------------------------------------------

CommandResult cmd_complexity_sweep(const json& config, const RunOptions& options) {
  double l = get_probability(config, "l", 0.4);
  auto ms = get_probability_list(config, "m", tenths());
  std::string method_name = config.value("weights", std::string("exact"));
  if (options.paper_params) {
    l = kImplementedL;
    ms = kImplementedM;
    method_name = config.value("weights", std::string("three_step"));
  }
  WeightMethod method{};
  try {
    method = parse_weight_method(method_name);
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  }
  const int steps = get_steps(config, kMaxCircuitSteps);

  const json effective = {{"l", l}, {"m", ms}, {"weights", method_name}, {"steps", steps}};
  const std::string hash = config_hash(effective);
  prepare_out_dir(options.out_dir);

  struct Row {
    bool ok = false;
    std::string status;
    double d0 = 0, c_mu = 0, c_q = 0, c_q_direct = 0;
  };
  std::vector<Row> rows(ms.size());
  const auto n = static_cast<std::ptrdiff_t>(ms.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    auto& row = rows[static_cast<std::size_t>(i)];
    try {
      const PerturbedCoin coin(l, ms[static_cast<std::size_t>(i)]);
      const auto w = stationary_weights(coin, method);
      row.d0 = w.d0;
      row.c_mu = classical_complexity(w);
      row.c_q = von_neumann_entropy(reconstruct_memory_density(coin, w, steps));
      row.c_q_direct = von_neumann_entropy(memory_density(coin, w));
      row.ok = true;
      row.status = "ok";
    } catch (const ReducibleChain&) {
      row.status = "reducible_chain";
    } catch (const std::exception& e) {
      row.status = std::string("error: ") + e.what();
    }
  }

  CommandResult result;
  CsvFile csv("complexity-sweep", hash, "m,d0,c_mu,c_q,status");
  double worst_oracle = 0.0;
  double worst_excess = 0.0;
  bool hard_error = false;
  PlotSeries cq{"C_q", {}, {}, "#c2185b"};
  PlotSeries cmu{"C_mu", {}, {}, "#00897b"};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (!r.ok) {
      csv.row({num(ms[i]), "", "", "", r.status});
      hard_error = hard_error || r.status != "reducible_chain";
      continue;
    }
    csv.row({num(ms[i]), num(r.d0), num(r.c_mu), num(r.c_q), r.status});
    worst_oracle = std::max(worst_oracle, std::abs(r.c_q - r.c_q_direct));
    worst_excess = std::max(worst_excess, r.c_q - r.c_mu);
    cq.x.push_back(ms[i]);
    cq.y.push_back(r.c_q);
    cmu.x.push_back(ms[i]);
    cmu.y.push_back(r.c_mu);
  }
  csv.write(options.out_dir / "complexity_sweep.csv", result);
  write_plot(options.out_dir / "complexity_sweep.svg",
             {"Statistical complexity, l = " + num(l), "m", "bits", {cq, cmu}}, result);

  const bool passed = !hard_error && worst_oracle <= 1e-10 && worst_excess <= kTol.identity_match;
  result.report = base_report("complexity-sweep", effective, hash);
  result.report["max_cq_oracle_deviation"] = worst_oracle;
  result.report["max_cq_minus_cmu"] = worst_excess;
  result.report["passed"] = passed;
  result.exit_code = passed ? kExitOk : kExitCheckFailed;
  return result;
}

// ---- hom-dip -------------------------------------------------------------

CommandResult cmd_hom_dip(const json& config, const RunOptions& options) {
  const ProcessWithStart fair{{PerturbedCoin(0.5, 0.5), "fair"}, CausalStateId::S0};
  const auto a = get_process(config, "process_a", fair);
  const auto b = get_process(config, "process_b", fair);
  const int steps = get_steps(config, kMaxCircuitSteps);
  const double sigma = get_number(config, "sigma_ns", 1.0);
  const double baseline = get_number(config, "baseline", 1e4);
  if (!(sigma > 0.0)) throw ConfigError("'sigma_ns' must be positive");
  if (!(baseline > 0.0)) throw ConfigError("'baseline' must be positive");

  std::vector<double> delays;
  if (config.contains("delays_ns") && config.at("delays_ns").is_object()) {
    const auto& d = config.at("delays_ns");
    const double from = get_number(d, "from", -4.0 * sigma);
    const double to = get_number(d, "to", 4.0 * sigma);
    const int count = get_int(d, "count", 41);
    if (count < 5 || !(to > from)) throw ConfigError("'delays_ns' needs from < to and count >= 5");
    for (int i = 0; i < count; ++i) delays.push_back(from + (to - from) * i / (count - 1));
  } else {
    delays = get_list(config, "delays_ns", {});
    if (delays.empty()) {
      for (int i = 0; i < 41; ++i) delays.push_back(-4.0 * sigma + 8.0 * sigma * i / 40.0);
    }
  }
  const bool poisson = config.value("poisson", false);
  std::optional<double> target;
  if (config.contains("visibility") && !config.at("visibility").is_null()) {
    target = get_probability(config, "visibility", 1.0);
  }

  json effective = {{"process_a", to_json(a)},  {"process_b", to_json(b)}, {"steps", steps},
                    {"sigma_ns", sigma},        {"baseline", baseline},   {"delays_ns", delays},
                    {"poisson", poisson}};
  if (target) effective["visibility"] = *target;
  std::uint64_t seed = 0;
  if (poisson) {
    seed = require_seed(config, options);
    effective["seed"] = seed;
  }
  const std::string hash = config_hash(effective);
  prepare_out_dir(options.out_dir);

  const double theory_v = visibility(run_circuit(a.process.coin, a.start, steps),
                                     run_circuit(b.process.coin, b.start, steps));
  const double used_v = target.value_or(theory_v);
  const auto curve = dip_curve(used_v, sigma, delays, baseline);
  std::vector<double> sampled;
  if (poisson) sampled = poisson_counts(curve.counts, seed);

  CommandResult result;
  CsvFile csv("hom-dip", hash, "delay_ns,expected_counts,sampled_counts");
  std::vector<DipSample> samples;
  for (std::size_t i = 0; i < delays.size(); ++i) {
    csv.row({num(delays[i]), num(curve.counts[i]), poisson ? num(sampled[i]) : ""});
    samples.push_back({delays[i], poisson ? sampled[i] : curve.counts[i]});
  }
  csv.write(options.out_dir / "hom_dip.csv", result);

  result.report = base_report("hom-dip", effective, hash);
  result.report["theoretical_visibility"] = theory_v;
  result.report["model_visibility"] = used_v;
  PlotSpec plot{"Two-photon coincidences", "relative delay (ns)", "coincidences",
                {{"expected", delays, curve.counts, "#1f77b4", true, false}}};
  try {
    const auto fit = fit_visibility(samples);
    result.report["fit"] = {{"visibility", fit.parameters.visibility},
                            {"visibility_sigma", fit.visibility_sigma},
                            {"baseline", fit.parameters.baseline},
                            {"sigma_ns", fit.parameters.sigma_ns},
                            {"center_ns", fit.parameters.center_ns},
                            {"chi2", fit.chi2},
                            {"iterations", fit.iterations}};
    result.report["passed"] = true;
    std::vector<double> fitted;
    for (double d : delays) fitted.push_back(dip_model(fit.parameters, d));
    plot.series.push_back({"fit", delays, fitted, "#d62728", true, false});
  } catch (const FitDidNotConverge& e) {
    result.report["fit"] = {{"error", e.what()}};
    result.report["passed"] = false;
    result.exit_code = kExitFitFailed;
  }
  if (poisson) plot.series.push_back({"sampled", delays, sampled, "#2ca02c", false, true});
  write_plot(options.out_dir / "hom_dip.svg", plot, result);
  write_json(options.out_dir / "hom_dip_fit.json", result.report, result);
  return result;
}

// ---- compare-sweep -------------------------------------------------------

namespace {

struct SeriesConfig {
  std::string name;
  ProcessWithStart fixed;
  double varying_m;
  CausalStateId varying_start;
  std::vector<double> ls;
};

std::vector<SeriesConfig> default_series() {
  return {
      {"magenta",
       {{PerturbedCoin(0.5, 0.5), "magenta-fixed"}, CausalStateId::S0},
       0.5,
       CausalStateId::S0,
       {0.00, 0.10, 0.30, 0.50, 0.70, 0.90, 0.99}},
      {"turquoise",
       {{PerturbedCoin(1.0, 1.0), "turquoise-fixed"}, CausalStateId::S0},
       0.5,
       CausalStateId::S0,
       {0.25, 0.50, 0.70, 0.85, 0.95, 1.0}},
  };
}

}  // namespace

CommandResult cmd_compare_sweep(const json& config, const RunOptions& options) {
  const int steps = get_steps(config, kMaxCircuitSteps);
  std::vector<SeriesConfig> series;
  if (config.contains("series")) {
    if (!config.at("series").is_array() || config.at("series").empty()) {
      throw ConfigError("'series' must be a nonempty array");
    }
    const ProcessWithStart fallback{{PerturbedCoin(0.5, 0.5), "fixed"}, CausalStateId::S0};
    for (const auto& s : config.at("series")) {
      if (!s.contains("l")) throw ConfigError("each series needs an 'l' list");
      series.push_back({s.value("name", std::string("series")), get_process(s, "fixed", fallback),
                        get_probability(s, "m", 0.5), get_start(s, "start", CausalStateId::S0),
                        get_probability_list(s, "l", {})});
    }
  } else {
    series = default_series();
  }

  json effective = {{"steps", steps}, {"series", json::array()}};
  for (const auto& s : series) {
    effective["series"].push_back({{"name", s.name},
                                   {"fixed", to_json(s.fixed)},
                                   {"m", s.varying_m},
                                   {"start", to_string(s.varying_start)},
                                   {"l", s.ls}});
  }
  const std::string hash = config_hash(effective);
  prepare_out_dir(options.out_dir);

  CommandResult result;
  CsvFile csv("compare-sweep", hash, "series,l,m,overlap,visibility,coincidence_min");
  json records = json::object();
  PlotSpec plot{"Visibility between statistical futures", "l of varying process", "visibility", {}};
  double worst_closed_form = 0.0;
  bool in_range = true;
  std::size_t colour = 0;
  for (const auto& s : series) {
    std::vector<ProcessWithStart> varying;
    for (double l : s.ls) {
      varying.push_back({{PerturbedCoin(l, s.varying_m), s.name + " l=" + num(l)}, s.varying_start});
    }
    const auto recs = visibility_sweep(s.fixed, varying, steps);
    PlotSeries line{s.name, {}, {}, kPalette[colour++ % 8]};
    for (std::size_t i = 0; i < recs.size(); ++i) {
      const auto& r = recs[i];
      csv.row({s.name, num(s.ls[i]), num(s.varying_m), num(r.overlap), num(r.visibility),
               num(r.coincidence_min)});
      const double closed = output_overlap(s.fixed.process, s.fixed.start, varying[i].process,
                                           varying[i].start, steps);
      worst_closed_form = std::max(worst_closed_form, std::abs(r.visibility - closed * closed));
      in_range = in_range && r.visibility >= 0.0 && r.visibility <= 1.0;
      line.x.push_back(s.ls[i]);
      line.y.push_back(r.visibility);
    }
    records[s.name] = to_json(recs)["records"];
    plot.series.push_back(std::move(line));
  }
  csv.write(options.out_dir / "compare_sweep.csv", result);
  write_json(options.out_dir / "compare_sweep.json",
             {{"schema_version", kSchemaVersion}, {"series", records}}, result);
  write_plot(options.out_dir / "compare_sweep.svg", plot, result);

  const bool passed = in_range && worst_closed_form <= kTol.identity_match;
  result.report = base_report("compare-sweep", effective, hash);
  result.report["max_closed_form_deviation"] = worst_closed_form;
  result.report["passed"] = passed;
  result.exit_code = passed ? kExitOk : kExitCheckFailed;
  return result;
}

// ---- oracle-check --------------------------------------------------------

CommandResult cmd_oracle_check(const json& config, const RunOptions& options) {
  const double grid_step = get_number(config, "grid_step", 0.05);
  if (!(grid_step > 0.0 && grid_step <= 1.0)) throw ConfigError("'grid_step' must be in (0, 1]");
  std::vector<int> step_list;
  for (double s : get_list(config, "steps", {1, 2, 3, 4})) {
    if (s < 1 || s > kMaxCircuitSteps || s != std::floor(s)) {
      throw ConfigError("'steps' entries must be integers in [1, 12]");
    }
    step_list.push_back(static_cast<int>(s));
  }
  const int draws = get_int(config, "random_draws", 1000);
  if (draws < 1) throw ConfigError("'random_draws' must be positive");
  const std::uint64_t seed = options.seed.value_or(config.value("seed", std::uint64_t{20190601}));
  const bool fault = options.inject_fault || config.value("inject_fault", false);

  const json effective = {{"grid_step", grid_step}, {"steps", step_list},
                          {"random_draws", draws},  {"seed", seed},
                          {"inject_fault", fault}};
  const std::string hash = config_hash(effective);
  prepare_out_dir(options.out_dir);

  const auto grid = grid_values(grid_step);
  const auto n = static_cast<std::ptrdiff_t>(grid.size());

  CheckResult amplitudes{"circuit_amplitudes_vs_ideal_output", 0, kTol.amplitude_match};
  CheckResult arrivals{"arrival_times_vs_enumeration", 0, kTol.amplitude_match};
  CheckResult success{"success_probability_2^-M", 0, kTol.identity_match};
  CheckResult normalization{"future_distribution_normalization", 0, kTol.distribution_sum};
  CheckResult reconstruction{"memory_reconstruction_vs_direct", 0, kTol.density_match};
  CheckResult complexity{"quantum_complexity_not_above_classical", 0, kTol.identity_match};

  double amp_dev = 0, arr_dev = 0, succ_dev = 0, norm_dev = 0, rec_dev = 0, cq_excess = 0;
  long amp_n = 0, arr_n = 0, succ_n = 0, norm_n = 0, rec_n = 0, cq_n = 0;
#pragma omp parallel for collapse(2) schedule(dynamic)                                          \
    reduction(max : amp_dev, arr_dev, succ_dev, norm_dev, rec_dev, cq_excess)                    \
    reduction(+ : amp_n, arr_n, succ_n, norm_n, rec_n, cq_n)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    for (std::ptrdiff_t j = 0; j < n; ++j) {
      const PerturbedCoin coin(grid[static_cast<std::size_t>(i)], grid[static_cast<std::size_t>(j)]);
      const bool reducible = coin.l() == 1.0 && coin.m() == 1.0;
      for (int steps : step_list) {
        for (auto start : {CausalStateId::S0, CausalStateId::S1}) {
          const auto circuit = run_circuit(coin, start, steps);
          const auto ideal = ideal_output_state(coin, start, steps);
          std::vector<cplx> amps(circuit.amplitudes().begin(), circuit.amplitudes().end());
          if (fault && i == n / 2 && j == n / 3 && steps == step_list.front() &&
              start == CausalStateId::S0) {
            amps[0] += 1e-6;
          }
          for (std::size_t k = 0; k < amps.size(); ++k) {
            amp_dev = std::max(amp_dev, std::abs(amps[k] - ideal.amplitudes()[k]));
          }
          ++amp_n;

          const auto timed = arrival_time_distribution(circuit);
          const auto exact = future_distribution(coin, start, steps);
          double sum = 0.0;
          for (std::uint32_t x = 0; x < exact.size(); ++x) {
            arr_dev = std::max(arr_dev, std::abs(timed.distribution[x] - exact[x]));
            sum += exact[x];
          }
          norm_dev = std::max(norm_dev, std::abs(sum - 1.0));
          succ_dev = std::max(succ_dev, std::abs(circuit.success_probability() -
                                                 std::ldexp(1.0, -steps)));
          ++arr_n;
          ++norm_n;
          ++succ_n;
        }
        for (auto method : {WeightMethod::ExactStationary, WeightMethod::PaperThreeStep}) {
          const auto w = reducible ? StationaryWeights::explicit_weights(0.5)
                                   : stationary_weights(coin, method);
          const auto direct = memory_density(coin, w);
          rec_dev = std::max(rec_dev, max_abs_difference(
                                          reconstruct_memory_density(coin, w, steps), direct));
          ++rec_n;
          if (method == WeightMethod::ExactStationary && steps == step_list.front()) {
            cq_excess = std::max(cq_excess, von_neumann_entropy(direct) - classical_complexity(w));
            ++cq_n;
          }
        }
      }
    }
  }
  amplitudes.max_abs_deviation = amp_dev;
  amplitudes.evaluations = amp_n;
  arrivals.max_abs_deviation = arr_dev;
  arrivals.evaluations = arr_n;
  success.max_abs_deviation = succ_dev;
  success.evaluations = succ_n;
  normalization.max_abs_deviation = norm_dev;
  normalization.evaluations = norm_n;
  reconstruction.max_abs_deviation = rec_dev;
  reconstruction.evaluations = rec_n;
  complexity.max_abs_deviation = std::max(0.0, cq_excess);
  complexity.evaluations = cq_n;

  // Output overlap M steps vs Bhattacharyya coefficient M + 1 steps, and the
  // closed form vs the simulated state inner product.
  CheckResult identity{"overlap_vs_bhattacharyya_one_step_ahead", 0, kTol.identity_match};
  CheckResult inner{"overlap_closed_form_vs_state_inner_product", 0, kTol.identity_match};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int d = 0; d < draws; ++d) {
    const ProcessSpec a{PerturbedCoin(unit(rng), unit(rng)), "a"};
    const ProcessSpec b{PerturbedCoin(unit(rng), unit(rng)), "b"};
    const auto sa = causal_state_after(static_cast<int>(rng() & 1u));
    const auto sb = causal_state_after(static_cast<int>(rng() & 1u));
    for (int steps = 1; steps <= 3; ++steps) {
      const double overlap = output_overlap(a, sa, b, sb, steps);
      identity.max_abs_deviation =
          std::max(identity.max_abs_deviation,
                   std::abs(overlap - bhattacharyya_futures(a, sa, b, sb, steps + 1)));
      const cplx direct = state_overlap(run_circuit(a.coin, sa, steps).amplitudes(),
                                        run_circuit(b.coin, sb, steps).amplitudes());
      inner.max_abs_deviation = std::max(inner.max_abs_deviation, std::abs(direct - overlap));
      ++identity.evaluations;
      ++inner.evaluations;
    }
  }

  const std::vector<CheckResult> checks = {amplitudes,     arrivals,   success, normalization,
                                           reconstruction, complexity, identity, inner};
  json list = json::array();
  bool all = true;
  for (const auto& c : checks) {
    list.push_back(c.to_json());
    all = all && c.passed();
  }
  CommandResult result;
  result.report = base_report("oracle-check", effective, hash);
  result.report["checks"] = list;
  result.report["passed"] = all;
  write_json(options.out_dir / "oracle_check.json", result.report, result);
  result.exit_code = all ? kExitOk : kExitCheckFailed;
  return result;
}

// ---- counts --------------------------------------------------------------

CommandResult cmd_counts(const json& config, const RunOptions& options) {
  const ProcessWithStart fallback{{PerturbedCoin(0.4, 0.7), "process"}, CausalStateId::S1};
  const auto process = get_process(config, "process", fallback);
  const int steps = get_steps(config, kMaxEnumerationSteps);
  if (config.contains("n") &&
      (!config.at("n").is_number_integer() || config.at("n").get<std::int64_t>() < 1)) {
    throw ConfigError("'n' must be a positive integer");
  }
  const std::uint64_t n = config.value("n", std::uint64_t{1000000});
  if (n == 0) throw ConfigError("'n' must be a positive integer");
  const int trials = get_int(config, "trials", 1);
  if (trials < 1) throw ConfigError("'trials' must be positive");
  const std::uint64_t seed = require_seed(config, options);

  const json effective = {{"process", to_json(process)}, {"steps", steps}, {"n", n},
                          {"trials", trials},            {"seed", seed}};
  const std::string hash = config_hash(effective);
  prepare_out_dir(options.out_dir);

  const auto theory = future_distribution(process.process.coin, process.start, steps);
  CommandResult result;
  CsvFile csv("counts", hash, "trial,bitstring,count,frequency,probability");
  json fidelities = json::array();
  double min_f = 1.0;
  for (int t = 0; t < trials; ++t) {
    const auto counts = sample_trajectories(process.process.coin, process.start, steps, n,
                                            seed + static_cast<std::uint64_t>(t));
    const auto freq = counts.frequencies();
    for (std::uint32_t x = 0; x < theory.size(); ++x) {
      csv.row({std::to_string(t), bitstring(x, steps), std::to_string(counts.counts[x]),
               num(freq[x]), num(theory[x])});
    }
    const double f = classical_fidelity(freq, theory);
    fidelities.push_back(f);
    min_f = std::min(min_f, f);
  }
  csv.write(options.out_dir / "counts.csv", result);
  result.report = base_report("counts", effective, hash);
  result.report["fidelities"] = fidelities;
  result.report["min_fidelity"] = min_f;
  result.report["passed"] = true;
  write_json(options.out_dir / "counts_report.json", result.report, result);
  return result;
}

// ---- dispatch ------------------------------------------------------------

CommandResult run_command(std::string_view command, const json& config,
                          const RunOptions& options) {
  CommandResult failed;
  try {
    if (command == "futures") return cmd_futures(config, options);
    if (command == "complexity-sweep") return cmd_complexity_sweep(config, options);
    if (command == "hom-dip") return cmd_hom_dip(config, options);
    if (command == "compare-sweep") return cmd_compare_sweep(config, options);
    if (command == "oracle-check") return cmd_oracle_check(config, options);
    if (command == "counts") return cmd_counts(config, options);
    throw ConfigError("unknown command '" + std::string(command) + "'");
  } catch (const ConfigError& e) {
    failed.exit_code = kExitConfigError;
    failed.report = {{"error", e.what()}};
  } catch (const InvalidParameter& e) {
    failed.exit_code = kExitConfigError;
    failed.report = {{"error", e.what()}};
  } catch (const json::exception& e) {
    failed.exit_code = kExitConfigError;
    failed.report = {{"error", std::string("config: ") + e.what()}};
  } catch (const FitDidNotConverge& e) {
    failed.exit_code = kExitFitFailed;
    failed.report = {{"error", e.what()}};
  } catch (const Error& e) {
    failed.exit_code = kExitCheckFailed;
    failed.report = {{"error", e.what()}};
  }
  return failed;
}

}  // namespace qcoin::cli
