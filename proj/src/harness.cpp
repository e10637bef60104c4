#include "vppart/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <set>
#include <thread>

#include "json.hpp"

#include "vppart/csv.hpp"
#include "vppart/errors.hpp"
#include "vppart/simd/kernels.hpp"
#include "vppart/stats.hpp"

namespace vppart {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename T>
bool has_duplicates(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  return std::adjacent_find(v.begin(), v.end()) != v.end();
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::vector<std::string> names_of(std::span<const Algorithm> algs) {
  std::vector<std::string> out;
  for (Algorithm a : algs) out.emplace_back(to_string(a));
  return out;
}

std::string cell_file_name(const CellKey& cell) {
  return "d" + std::to_string(cell.dim) + "_t" + hex16(double_bits(cell.theta)) + "_" +
         std::string(to_string(cell.pattern)) + ".csv";
}

std::vector<double> f_measures(std::span<const TrialResult> trials, Algorithm alg) {
  std::vector<double> out;
  for (const auto& t : trials) {
    if (t.algorithm == alg && !t.exhausted) out.push_back(static_cast<double>(t.f_measure));
  }
  return out;
}

std::uint64_t parse_u64(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string("bad ") + what + " value '" + s + "'");
  }
}

double parse_double(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string("bad ") + what + " value '" + s + "'");
  }
}

std::size_t count_value(const json& v, const char* key) {
  if (!v.is_number_unsigned()) throw ConfigError(std::string("'") + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

int int_value(const json& v, const char* key) {
  if (!v.is_number_integer()) throw ConfigError(std::string("'") + key + "' must be an integer");
  return v.get<int>();
}

// Runs every algorithm on rep's failure region. Returns the infeasibility
// reason instead of throwing so one bad cell does not stop the run.
std::optional<std::string> run_rep(const ExperimentConfig& config, const CellKey& cell, std::size_t rep,
                                   std::span<const Algorithm> algorithms, const ArtConfig& art,
                                   std::vector<TrialResult>& out) {
  const std::uint64_t seed = trial_seed(config.base_seed, cell.dim, cell.theta, cell.pattern, rep);
  RandomStream profile_rng(RngSeed{seed, kProfileStream});
  try {
    const FailureProfile profile = make_profile(cell.pattern, cell.theta, art.domain, profile_rng);
    const std::uint64_t cap = default_cap(cell.theta, config.cap_multiplier);
    for (Algorithm alg : algorithms) {
      TrialResult r = run_until_failure(alg, profile, art, seed, cap);
      r.rep = rep;
      out.push_back(r);
    }
  } catch (const InfeasibleRegion& e) {
    return std::string(e.what());
  }
  return std::nullopt;
}

}  // namespace

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (!stop.load()) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) break;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          stop.store(true);
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

void ExperimentConfig::validate() const {
  if (algorithms.empty()) throw ConfigError("algorithms must not be empty");
  if (dims.empty()) throw ConfigError("dims must not be empty");
  if (thetas.empty()) throw ConfigError("thetas must not be empty");
  if (patterns.empty()) throw ConfigError("patterns must not be empty");
  if (has_duplicates(algorithms) || has_duplicates(dims) || has_duplicates(thetas) || has_duplicates(patterns)) {
    throw ConfigError("algorithms, dims, thetas and patterns must not repeat values");
  }
  for (std::size_t d : dims) {
    if (d < 1) throw ConfigError("dims must be at least 1");
  }
  for (double t : thetas) {
    if (!(t > 0.0 && t <= 1.0)) throw ConfigError("thetas must lie in (0, 1]");
  }
  if (reps < 1) throw ConfigError("reps must be at least 1");
  if (k < 1) throw ConfigError("k must be at least 1");
  if (epsilon < 2) throw ConfigError("epsilon must be at least 2");
  if (lambda < 1 || lambda < epsilon - 1) throw ConfigError("lambda must be at least max(1, epsilon - 1)");
  if (!(cap_multiplier > 0.0) || !std::isfinite(cap_multiplier)) throw ConfigError("cap_multiplier must be positive");
  if (parallelism < 1) throw ConfigError("parallelism must be at least 1");
}

ArtConfig ExperimentConfig::art_config(std::size_t dim) const {
  ArtConfig art;
  art.k = k;
  art.tree = TreeParams{epsilon, lambda};
  art.domain = InputDomain::unit(dim);
  return art;
}

std::string ExperimentConfig::canonical_json() const {
  json j;
  j["algorithms"] = names_of(algorithms);
  j["dims"] = dims;
  j["thetas"] = thetas;
  std::vector<std::string> pats;
  for (Pattern p : patterns) pats.emplace_back(to_string(p));
  j["patterns"] = pats;
  j["reps"] = reps;
  j["seed"] = base_seed;
  j["k"] = k;
  j["epsilon"] = epsilon;
  j["lambda"] = lambda;
  j["cap_multiplier"] = cap_multiplier;
  return j.dump();
}

std::string ExperimentConfig::hash() const { return hex16(fnv1a(canonical_json())); }

ConfigFile parse_config(std::string_view json_text, ExperimentConfig defaults) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object");

  ConfigFile out{std::move(defaults), std::nullopt};
  ExperimentConfig& c = out.experiment;
  auto section = [&](const char* name, const std::set<std::string>& keys) -> const json* {
    if (!root.contains(name)) return nullptr;
    const json& s = root.at(name);
    if (!s.is_object()) throw ConfigError(std::string("config section '") + name + "' must be an object");
    for (const auto& item : s.items()) {
      const std::string& key = item.key();
      if (!keys.count(key)) throw ConfigError(std::string("unknown key '") + key + "' in section '" + name + "'");
    }
    return &s;
  };
  for (const auto& item : root.items()) {
    const std::string& key = item.key();
    if (key != "experiment" && key != "art" && key != "run") throw ConfigError("unknown config section '" + key + "'");
  }

  try {
    if (const json* e = section("experiment",
                                {"algorithms", "dims", "thetas", "patterns", "reps", "seed", "cap_multiplier"})) {
      if (e->contains("algorithms")) {
        c.algorithms.clear();
        for (const auto& a : e->at("algorithms")) c.algorithms.push_back(parse_algorithm(a.get<std::string>()));
      }
      if (e->contains("dims")) {
        c.dims.clear();
        for (const auto& d : e->at("dims")) c.dims.push_back(count_value(d, "dims"));
      }
      if (e->contains("thetas")) c.thetas = e->at("thetas").get<std::vector<double>>();
      if (e->contains("patterns")) {
        c.patterns.clear();
        for (const auto& p : e->at("patterns")) c.patterns.push_back(parse_pattern(p.get<std::string>()));
      }
      if (e->contains("reps")) c.reps = count_value(e->at("reps"), "reps");
      if (e->contains("seed")) c.base_seed = count_value(e->at("seed"), "seed");
      if (e->contains("cap_multiplier")) c.cap_multiplier = e->at("cap_multiplier").get<double>();
    }
    if (const json* a = section("art", {"k", "epsilon", "lambda"})) {
      if (a->contains("k")) c.k = count_value(a->at("k"), "k");
      if (a->contains("epsilon")) c.epsilon = int_value(a->at("epsilon"), "epsilon");
      if (a->contains("lambda")) c.lambda = int_value(a->at("lambda"), "lambda");
    }
    if (const json* r = section("run", {"parallelism", "out"})) {
      if (r->contains("parallelism")) c.parallelism = count_value(r->at("parallelism"), "parallelism");
      if (r->contains("out")) out.out = r->at("out").get<std::string>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config value has the wrong type: ") + e.what());
  }
  return out;
}

ConfigFile load_config(const std::filesystem::path& path, ExperimentConfig defaults) {
  return parse_config(csv::read_file(path), std::move(defaults));
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t dim, double theta, Pattern pattern, std::size_t rep) {
  return stable_hash({base_seed, dim, double_bits(theta), static_cast<std::uint64_t>(pattern), rep});
}

std::vector<ScenarioSummary> summarize_cell(const CellKey& cell, std::span<const TrialResult> trials,
                                            std::span<const Algorithm> order) {
  std::vector<Algorithm> present;
  for (Algorithm a : order) {
    if (std::any_of(trials.begin(), trials.end(), [&](const TrialResult& t) { return t.algorithm == a; })) {
      present.push_back(a);
    }
  }
  std::vector<std::vector<double>> samples;
  for (Algorithm a : present) samples.push_back(f_measures(trials, a));

  std::vector<ScenarioSummary> rows;
  for (std::size_t i = 0; i < present.size(); ++i) {
    ScenarioSummary s;
    s.algorithm = present[i];
    s.cell = cell;
    double time_sum = 0.0;
    for (const auto& t : trials) {
      if (t.algorithm != s.algorithm) continue;
      ++s.reps;
      if (t.exhausted) {
        ++s.exhausted;
      } else {
        time_sum += t.f_time;
      }
    }
    const auto& mine = samples[i];
    if (mine.empty()) {
      s.mean_f = s.f_ratio = s.mean_f_time = kNaN;
    } else {
      double sum = 0.0;
      for (double f : mine) sum += f;
      s.mean_f = sum / static_cast<double>(mine.size());
      s.f_ratio = f_ratio(s.mean_f, cell.theta);
      s.mean_f_time = time_sum / static_cast<double>(mine.size());
    }
    for (std::size_t j = 0; j < present.size(); ++j) {
      if (j == i) continue;
      Comparison c{present[j], kNaN, kNaN};
      if (!mine.empty() && !samples[j].empty()) {
        c.p_value = mann_whitney_p(mine, samples[j]);
        c.effect_size = vargha_delaney_a12(samples[j], mine);
      }
      s.versus.push_back(c);
    }
    rows.push_back(std::move(s));
  }
  return rows;
}

std::vector<ScenarioSummary> summarize_trials(std::span<const TrialResult> trials) {
  std::vector<CellKey> cells;
  std::vector<Algorithm> order;
  for (const auto& t : trials) {
    const CellKey key{t.dim, t.theta, t.pattern};
    if (std::find(cells.begin(), cells.end(), key) == cells.end()) cells.push_back(key);
    if (std::find(order.begin(), order.end(), t.algorithm) == order.end()) order.push_back(t.algorithm);
  }
  std::vector<ScenarioSummary> rows;
  for (const auto& cell : cells) {
    std::vector<TrialResult> in_cell;
    for (const auto& t : trials) {
      if (CellKey{t.dim, t.theta, t.pattern} == cell) in_cell.push_back(t);
    }
    auto part = summarize_cell(cell, in_cell, order);
    rows.insert(rows.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return rows;
}

ResultTable run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  ResultTable table;
  table.config_hash = config.hash();
  const std::size_t per_cell = config.reps * config.algorithms.size();

  for (std::size_t dim : config.dims) {
    const ArtConfig art = config.art_config(dim);
    for (double theta : config.thetas) {
      for (Pattern pattern : config.patterns) {
        const CellKey cell{dim, theta, pattern};
        std::vector<TrialResult> cell_trials;
        std::optional<std::filesystem::path> cache;
        if (options.cell_dir) cache = *options.cell_dir / table.config_hash / cell_file_name(cell);

        bool resumed = false;
        if (cache && std::filesystem::exists(*cache)) {
          cell_trials = parse_trials_csv(csv::read_file(*cache));
          resumed = cell_trials.size() == per_cell;
          for (auto& t : cell_trials) {
            t.theta = theta;
            resumed = resumed && t.dim == dim && t.pattern == pattern;
          }
          if (!resumed) cell_trials.clear();
        }

        std::optional<std::string> infeasible;
        if (resumed) {
          ++table.cells_resumed;
        } else {
          std::vector<std::vector<TrialResult>> by_rep(config.reps);
          std::vector<std::optional<std::string>> reasons(config.reps);
          parallel_for(config.reps, config.parallelism, [&](std::size_t rep) {
            reasons[rep] = run_rep(config, cell, rep, config.algorithms, art, by_rep[rep]);
          });
          for (std::size_t rep = 0; rep < config.reps && !infeasible; ++rep) infeasible = reasons[rep];
          if (!infeasible) {
            for (auto& v : by_rep) cell_trials.insert(cell_trials.end(), v.begin(), v.end());
            if (cache) csv::write_file_atomic(*cache, trials_csv(cell_trials));
          }
        }

        if (infeasible) {
          table.skipped.push_back({cell, *infeasible});
          for (Algorithm a : config.algorithms) {
            ScenarioSummary s;
            s.algorithm = a;
            s.cell = cell;
            s.mean_f = s.f_ratio = s.mean_f_time = kNaN;
            s.skipped = true;
            s.skip_reason = *infeasible;
            table.rows.push_back(std::move(s));
          }
          continue;
        }
        auto rows = summarize_cell(cell, cell_trials, config.algorithms);
        table.rows.insert(table.rows.end(), rows.begin(), rows.end());
        table.trials.insert(table.trials.end(), cell_trials.begin(), cell_trials.end());
      }
    }
  }
  table.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return table;
}

std::vector<ParamStudyRow> run_param_study(const ExperimentConfig& base, std::span<const int> epsilons,
                                           std::span<const int> lambdas) {
  base.validate();
  if (epsilons.empty() || lambdas.empty()) throw ConfigError("paramstudy needs at least one epsilon and one lambda");
  for (int e : epsilons) {
    for (int l : lambdas) {
      ExperimentConfig probe = base;
      probe.epsilon = e;
      probe.lambda = l;
      probe.validate();
    }
  }
  const double theta = base.thetas.front();
  std::vector<ParamStudyRow> rows;

  auto study = [&](std::size_t dim, Algorithm alg, int eps, int lam) {
    ExperimentConfig c = base;
    c.epsilon = eps == 0 ? base.epsilon : eps;
    c.lambda = lam == 0 ? base.lambda : lam;
    const ArtConfig art = c.art_config(dim);
    const CellKey cell{dim, theta, Pattern::Block};
    std::vector<std::vector<TrialResult>> by_rep(c.reps);
    const Algorithm single[] = {alg};
    parallel_for(c.reps, c.parallelism, [&](std::size_t rep) {
      if (auto reason = run_rep(c, cell, rep, single, art, by_rep[rep])) throw InfeasibleRegion(*reason);
    });
    std::vector<TrialResult> trials;
    for (auto& v : by_rep) trials.insert(trials.end(), v.begin(), v.end());
    const auto summary = summarize_cell(cell, trials, single).front();
    rows.push_back({dim, alg, eps, lam, summary.reps, summary.exhausted, summary.mean_f, summary.f_ratio});
  };

  for (std::size_t dim : base.dims) {
    study(dim, Algorithm::Fscs, 0, 0);
    for (int e : epsilons) {
      for (int l : lambdas) study(dim, Algorithm::Vpp, e, l);
    }
  }
  return rows;
}

std::vector<TimingSeries> run_benchmark(std::span<const std::size_t> dims, std::span<const Algorithm> algorithms,
                                        const BenchmarkOptions& options) {
  std::vector<TimingSeries> out;
  for (std::size_t d : dims) {
    for (Algorithm a : algorithms) out.push_back(benchmark_generation(a, d, options));
  }
  return out;
}

std::string summary_csv(std::span<const ScenarioSummary> rows, std::span<const Algorithm> algorithms) {
  csv::Row header{"algorithm", "d", "theta", "pattern", "reps", "exhausted", "mean_f", "f_ratio"};
  for (Algorithm a : algorithms) {
    header.push_back("p_vs_" + std::string(to_string(a)));
    header.push_back("a12_vs_" + std::string(to_string(a)));
  }
  header.push_back("status");
  header.push_back("reason");
  std::string out = csv::format_row(header);
  for (const auto& s : rows) {
    csv::Row r{std::string(to_string(s.algorithm)), std::to_string(s.cell.dim), csv::real(s.cell.theta),
               std::string(to_string(s.cell.pattern)), std::to_string(s.reps), std::to_string(s.exhausted),
               csv::real(s.mean_f), csv::real(s.f_ratio)};
    for (Algorithm a : algorithms) {
      const auto it = std::find_if(s.versus.begin(), s.versus.end(), [&](const Comparison& c) { return c.other == a; });
      r.push_back(it == s.versus.end() ? "" : csv::real(it->p_value));
      r.push_back(it == s.versus.end() ? "" : csv::real(it->effect_size));
    }
    r.push_back(s.skipped ? "skipped" : "ok");
    r.push_back(s.skip_reason);
    out += csv::format_row(r);
  }
  return out;
}

std::string summary_csv(const ResultTable& table, std::span<const Algorithm> algorithms) {
  return summary_csv(std::span<const ScenarioSummary>(table.rows), algorithms);
}

std::string trials_csv(std::span<const TrialResult> trials) {
  std::string out =
      csv::format_row({"algorithm", "d", "theta", "pattern", "rep", "seed", "f_measure", "f_time", "exhausted"});
  for (const auto& t : trials) {
    out += csv::format_row({std::string(to_string(t.algorithm)), std::to_string(t.dim), csv::real(t.theta),
                            std::string(to_string(t.pattern)), std::to_string(t.rep), std::to_string(t.seed),
                            std::to_string(t.f_measure), csv::real(t.f_time), t.exhausted ? "1" : "0"});
  }
  return out;
}

std::vector<TrialResult> parse_trials_csv(std::string_view text) {
  const auto rows = csv::parse(text);
  if (rows.empty()) throw ConfigError("trials csv is empty");
  const csv::Row& header = rows.front();
  auto column = [&](const char* name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ConfigError(std::string("trials csv lacks column '") + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_alg = column("algorithm"), c_d = column("d"), c_theta = column("theta"),
                    c_pat = column("pattern"), c_rep = column("rep"), c_seed = column("seed"),
                    c_f = column("f_measure"), c_time = column("f_time"), c_ex = column("exhausted");
  std::vector<TrialResult> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() == 1 && r[0].empty()) continue;
    if (r.size() != header.size()) throw ConfigError("trials csv row " + std::to_string(i) + " has wrong width");
    TrialResult t;
    t.algorithm = parse_algorithm(r[c_alg]);
    t.dim = parse_u64(r[c_d], "d");
    t.theta = parse_double(r[c_theta], "theta");
    t.pattern = parse_pattern(r[c_pat]);
    t.rep = parse_u64(r[c_rep], "rep");
    t.seed = parse_u64(r[c_seed], "seed");
    t.f_measure = parse_u64(r[c_f], "f_measure");
    t.f_time = r[c_time].empty() ? kNaN : parse_double(r[c_time], "f_time");
    t.exhausted = parse_u64(r[c_ex], "exhausted") != 0;
    out.push_back(t);
  }
  return out;
}

std::string param_study_csv(std::span<const ParamStudyRow> rows) {
  std::string out =
      csv::format_row({"d", "algorithm", "epsilon", "lambda", "reps", "exhausted", "mean_f", "f_ratio"});
  for (const auto& r : rows) {
    out += csv::format_row({std::to_string(r.dim), std::string(to_string(r.algorithm)),
                            r.epsilon == 0 ? "" : std::to_string(r.epsilon),
                            r.lambda == 0 ? "" : std::to_string(r.lambda), std::to_string(r.reps),
                            std::to_string(r.exhausted), csv::real(r.mean_f), csv::real(r.f_ratio)});
  }
  return out;
}

std::string timings_csv(std::span<const TimingSeries> series) {
  std::string out = csv::format_row({"algorithm", "d", "n", "seconds"});
  for (const auto& s : series) {
    for (const auto& c : s.checkpoints) {
      out += csv::format_row({std::string(to_string(s.algorithm)), std::to_string(s.dim),
                              std::to_string(c.n_generated), csv::real(c.cumulative_seconds)});
    }
  }
  return out;
}

std::string metadata_json(const ExperimentConfig& config, const ResultTable& table) {
  json j;
  j["version"] = std::string(table.version);
  j["config"] = json::parse(config.canonical_json());
  j["config"]["parallelism"] = config.parallelism;
  j["config_hash"] = table.config_hash;
  j["wall_seconds"] = table.wall_seconds;
  j["simd"] = std::string(simd::level_name(simd::active().level));
  j["seed_derivation"] =
      "trial seed = stable_hash(seed, d, bits(theta), pattern, rep); streams: profile 0, candidates 1, vantage 2";
  j["cells_resumed"] = table.cells_resumed;
  json skipped = json::array();
  for (const auto& s : table.skipped) {
    skipped.push_back({{"d", s.cell.dim}, {"theta", s.cell.theta}, {"pattern", std::string(to_string(s.cell.pattern))},
                       {"reason", s.reason}});
  }
  j["skipped_cells"] = skipped;
  json rows = json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"algorithm", std::string(to_string(r.algorithm))},
                    {"d", r.cell.dim},
                    {"theta", r.cell.theta},
                    {"pattern", std::string(to_string(r.cell.pattern))},
                    {"reps", r.reps},
                    {"exhausted", r.exhausted},
                    {"base_seed", config.base_seed},
                    {"mean_f_time", std::isnan(r.mean_f_time) ? json(nullptr) : json(r.mean_f_time)}});
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

}  // namespace vppart
