#include "gsp/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

#include "gsp/errors.hpp"
#include "gsp/io.hpp"
#include "gsp/random.hpp"
#include "gsp/reconstruct.hpp"
#include "gsp/signals.hpp"

namespace gsp {

using Eigen::VectorXd;

namespace {

constexpr const char* kVersion = "0.1.0";

// Stream tags for derive_seed.
constexpr std::uint64_t kGraphStream = 0x67;
constexpr std::uint64_t kSelectStream = 0x5e1;
constexpr std::uint64_t kSignalStream = 0x519;
constexpr std::uint64_t kNoiseStream = 0x401;
constexpr std::uint64_t kBenchStream = 0xbe;

const std::set<std::string> kSelectorNames = {"greedy_proxy", "e_opt", "a_opt",
                                              "m2", "gauss_pivot", "random"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

[[noreturn]] void config_fail(long line, const std::string& what) {
  throw ConfigError("line " + std::to_string(line) + ": " + what);
}

long long to_integer(const std::string& v, long line) {
  std::size_t pos = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &pos);
  } catch (const std::exception&) {
    config_fail(line, "expected an integer, got '" + v + "'");
  }
  if (pos != v.size()) config_fail(line, "expected an integer, got '" + v + "'");
  return x;
}

int to_int(const std::string& v, long line) {
  const long long x = to_integer(v, line);
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
    config_fail(line, "integer out of range: " + v);
  }
  return static_cast<int>(x);
}

double to_double(const std::string& v, long line) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    config_fail(line, "expected a number, got '" + v + "'");
  }
  if (pos != v.size()) config_fail(line, "expected a number, got '" + v + "'");
  return x;
}

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

bool kind_is_symmetric(OperatorKind kind, bool directed) {
  if (!directed) return kind != OperatorKind::random_walk_undirected;
  return kind == OperatorKind::hub_authority || kind == OperatorKind::random_walk_directed;
}

// Checks that depend on the graph itself.
void check_graph_compat(const ExperimentConfig& cfg, int n, bool directed) {
  if (directed && !kind_is_symmetric(cfg.kind, true)) {
    throw ConfigError(to_string(cfg.kind) +
                      " on a directed graph can give a complex basis; use hub_authority or "
                      "random_walk_directed");
  }
  if (!kind_is_symmetric(cfg.kind, directed)) {
    for (const auto& s : cfg.selectors) {
      if (s.name == "m2") {
        throw ConfigError("m2 needs an orthonormal basis, which " + to_string(cfg.kind) +
                          " does not give");
      }
    }
  }
  if (cfg.r > n) throw ConfigError("signal r exceeds the graph size");
  if (cfg.sweep_max > n) throw ConfigError("sweep max exceeds the graph size");
  if (n > cfg.dense_cap) {
    throw ConfigError("graph size " + std::to_string(n) + " exceeds dense_cap " +
                      std::to_string(cfg.dense_cap) + " needed for the signal basis");
  }
}

Graph make_graph(const GraphSpec& spec, int n, std::uint64_t seed) {
  if (spec.model == "erdos_renyi") return erdos_renyi(n, spec.p, seed);
  if (spec.model == "small_world") return small_world(n, spec.degree, spec.beta, seed);
  if (spec.model == "barabasi_albert") return barabasi_albert(n, spec.m0, spec.m, seed);
  if (spec.model == "file") return load_graph(spec.path);
  throw ConfigError("unknown graph model '" + spec.model + "'");
}

SignalModel signal_model(const ExperimentConfig& cfg) {
  SignalModel m;
  m.kind = cfg.signal == "F3" ? SignalModel::Kind::approx_bandlimited
                              : SignalModel::Kind::exact_bandlimited;
  m.r = cfg.r;
  m.decay = cfg.decay;
  return m;
}

std::vector<int> sweep_points(const ExperimentConfig& cfg) {
  std::vector<int> out;
  for (int m = cfg.sweep_min; m <= cfg.sweep_max; m += cfg.sweep_step) out.push_back(m);
  return out;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + p.string());
  return out;
}

nlohmann::json number_or_null(double x) {
  return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

}  // namespace

std::string SelectorSpec::label() const {
  return name == "greedy_proxy" ? name + "(" + std::to_string(k) + ")" : name;
}

bool SelectorSpec::needs_basis() const {
  return name == "e_opt" || name == "a_opt" || name == "m2" || name == "gauss_pivot";
}

SelectorSpec parse_selector(const std::string& text) {
  const std::string t = trim(text);
  SelectorSpec s;
  std::string arg;
  const auto colon = t.find(':');
  const auto paren = t.find('(');
  if (colon != std::string::npos) {
    s.name = trim(t.substr(0, colon));
    arg = trim(t.substr(colon + 1));
  } else if (paren != std::string::npos) {
    if (t.back() != ')') throw ConfigError("selector '" + t + "': missing ')'");
    s.name = trim(t.substr(0, paren));
    arg = trim(t.substr(paren + 1, t.size() - paren - 2));
  } else {
    s.name = t;
  }
  if (!kSelectorNames.count(s.name)) throw ConfigError("unknown selector '" + s.name + "'");
  if (s.name == "greedy_proxy") {
    if (arg.empty()) throw ConfigError("greedy_proxy needs an order, e.g. greedy_proxy:8");
    std::size_t pos = 0;
    try {
      s.k = std::stoi(arg, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != arg.size() || s.k < 1) {
      throw ConfigError("greedy_proxy order must be a positive integer, got '" + arg + "'");
    }
  } else if (!arg.empty()) {
    throw ConfigError("selector " + s.name + " takes no argument");
  }
  return s;
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string raw, section;
  long line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') config_fail(line, "malformed section header");
      section = trim(text.substr(1, text.size() - 2));
      static const std::set<std::string> known = {"graph", "operator", "signal", "selectors",
                                                  "sweep", "run", "bench"};
      if (!known.count(section)) config_fail(line, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) config_fail(line, "expected key = value");
    const std::string key = trim(text.substr(0, eq));
    const std::string val = trim(text.substr(eq + 1));
    if (section.empty()) config_fail(line, "key outside of a section");
    if (val.empty()) config_fail(line, "empty value for '" + key + "'");
    const std::string full = section + "." + key;

    if (full == "graph.model") cfg.graph.model = val;
    else if (full == "graph.n") cfg.graph.n = to_int(val, line);
    else if (full == "graph.p") cfg.graph.p = to_double(val, line);
    else if (full == "graph.degree") cfg.graph.degree = to_int(val, line);
    else if (full == "graph.beta") cfg.graph.beta = to_double(val, line);
    else if (full == "graph.m0") cfg.graph.m0 = to_int(val, line);
    else if (full == "graph.m") cfg.graph.m = to_int(val, line);
    else if (full == "graph.path") cfg.graph.path = val;
    else if (full == "graph.instances") cfg.graph.instances = to_int(val, line);
    else if (full == "operator.kind") {
      try {
        cfg.kind = operator_kind_from_string(val);
      } catch (const InvalidArgument& e) {
        config_fail(line, e.what());
      }
    } else if (full == "operator.gamma") cfg.gamma = to_double(val, line);
    else if (full == "signal.model") cfg.signal = val;
    else if (full == "signal.r") cfg.r = to_int(val, line);
    else if (full == "signal.snr_db") cfg.snr_db = to_double(val, line);
    else if (full == "signal.decay") cfg.decay = to_double(val, line);
    else if (full == "selectors.methods") {
      cfg.selectors.clear();
      for (const auto& item : split(val, ',')) {
        if (item.empty()) config_fail(line, "empty selector entry");
        try {
          cfg.selectors.push_back(parse_selector(item));
        } catch (const ConfigError& e) {
          config_fail(line, e.what());
        }
      }
    } else if (full == "sweep.min") cfg.sweep_min = to_int(val, line);
    else if (full == "sweep.max") cfg.sweep_max = to_int(val, line);
    else if (full == "sweep.step") cfg.sweep_step = to_int(val, line);
    else if (full == "sweep.trials") cfg.trials = to_int(val, line);
    else if (full == "run.seed") {
      const long long s = to_integer(val, line);
      if (s < 0) config_fail(line, "seed must be nonnegative");
      cfg.seed = static_cast<std::uint64_t>(s);
    } else if (full == "run.output_dir") cfg.output_dir = val;
    else if (full == "run.dense_cap") cfg.dense_cap = to_int(val, line);
    else if (full == "bench.sizes") {
      cfg.bench_sizes.clear();
      for (const auto& item : split(val, ',')) cfg.bench_sizes.push_back(to_int(item, line));
    } else if (full == "bench.fraction") cfg.bench_fraction = to_double(val, line);
    else if (full == "bench.repeats") cfg.bench_repeats = to_int(val, line);
    else config_fail(line, "unknown key '" + key + "' in [" + section + "]");
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse_config(in);
}

void validate_config(const ExperimentConfig& cfg) {
  const GraphSpec& g = cfg.graph;
  if (g.model == "file") {
    if (g.path.empty()) throw ConfigError("graph model 'file' needs a path");
    if (g.instances != 1) throw ConfigError("a file graph has exactly one instance");
  } else if (g.model == "erdos_renyi") {
    if (!(g.p >= 0.0 && g.p <= 1.0)) throw ConfigError("graph p must lie in [0, 1]");
  } else if (g.model == "small_world") {
    if (g.degree < 2 || g.degree % 2 != 0) {
      throw ConfigError("small_world degree must be even and >= 2");
    }
    if (!(g.beta >= 0.0 && g.beta <= 1.0)) throw ConfigError("graph beta must lie in [0, 1]");
  } else if (g.model == "barabasi_albert") {
    if (g.m < 1 || g.m0 < g.m) throw ConfigError("barabasi_albert needs 1 <= m <= m0");
  } else {
    throw ConfigError("unknown graph model '" + g.model + "'");
  }
  if (g.model != "file" && g.n < 1) throw ConfigError("graph n must be positive");
  if (g.instances < 1) throw ConfigError("graph instances must be >= 1");
  if (!(cfg.gamma >= 0.0 && cfg.gamma <= 1.0)) {
    throw ConfigError("gamma must lie in [0, 1]");
  }
  if (cfg.signal != "F1" && cfg.signal != "F2" && cfg.signal != "F3") {
    throw ConfigError("signal model must be F1, F2 or F3");
  }
  if (cfg.r < 1) throw ConfigError("signal r must be >= 1");
  if (cfg.signal == "F3" && !(cfg.decay > 0.0)) throw ConfigError("signal decay must be > 0");
  if (cfg.signal == "F2" && std::isnan(cfg.snr_db)) throw ConfigError("snr_db is not a number");
  if (cfg.selectors.empty()) throw ConfigError("at least one selector is required");
  std::set<std::string> labels;
  for (const auto& s : cfg.selectors) {
    if (!labels.insert(s.label()).second) throw ConfigError("duplicate selector " + s.label());
  }
  if (cfg.sweep_min < 1) throw ConfigError("sweep min must be >= 1");
  if (cfg.sweep_max < cfg.sweep_min) throw ConfigError("sweep max is below sweep min");
  if (cfg.sweep_step < 1) throw ConfigError("sweep step must be >= 1");
  if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
  if (cfg.dense_cap < 1) throw ConfigError("dense_cap must be positive");
  for (int n : cfg.bench_sizes) {
    if (n < 1) throw ConfigError("bench sizes must be positive");
  }
  if (!(cfg.bench_fraction > 0.0 && cfg.bench_fraction <= 1.0)) {
    throw ConfigError("bench fraction must lie in (0, 1]");
  }
  if (cfg.bench_repeats < 1) throw ConfigError("bench repeats must be >= 1");
  if (g.model != "file") check_graph_compat(cfg, g.n, false);
}

SamplingSet run_selector(const SelectorSpec& spec, const VariationOperator& L,
                         const GftBasis* basis, int m, int r, std::uint64_t seed,
                         GreedyStats* stats) {
  if (spec.name == "greedy_proxy") {
    SolverConfig sc;
    sc.seed = seed;
    return select_greedy_proxy(L, m, spec.k, sc, stats);
  }
  if (spec.name == "random") return select_random(L.size(), m, seed);
  if (!basis) throw InvalidArgument("selector " + spec.name + " needs a GFT basis");
  if (spec.name == "e_opt") return select_optimal_design(*basis, m, r, DesignCriterion::e_opt);
  if (spec.name == "a_opt") return select_optimal_design(*basis, m, r, DesignCriterion::a_opt);
  if (spec.name == "m2") return select_m2(*basis, m);
  if (spec.name == "gauss_pivot") return select_gauss_pivot(*basis, m);
  throw InvalidArgument("unknown selector '" + spec.name + "'");
}

MseResult run_mse_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const std::vector<int> points = sweep_points(cfg);
  const SignalModel model = signal_model(cfg);
  OperatorParams params;
  params.gamma = cfg.gamma;

  // mse[selector][point] holds every successful trial, graph-major.
  const std::size_t ns = cfg.selectors.size(), np = points.size();
  std::vector<std::vector<std::vector<double>>> mse(ns, std::vector<std::vector<double>>(np));
  std::vector<std::vector<int>> failures(ns, std::vector<int>(np, 0));
  MseResult result;

  for (int gi = 0; gi < cfg.graph.instances; ++gi) {
    const Graph g = make_graph(cfg.graph, cfg.graph.n, derive_seed(cfg.seed, kGraphStream, gi));
    if (cfg.graph.model == "file") check_graph_compat(cfg, g.num_nodes(), g.directed());
    const VariationOperator L = build_variation_operator(g, cfg.kind, params);
    const GftBasis basis = dense_gft(L, cfg.dense_cap);
    if (basis.is_complex) throw ConfigError("the operator has a complex GFT basis");

    // Common random numbers: every selector sees the same signals.
    std::vector<VectorXd> truth, observed;
    for (int t = 0; t < cfg.trials; ++t) {
      const std::uint64_t ts = derive_seed(cfg.seed, kSignalStream, derive_seed(gi, t));
      VectorXd f = gen_signal(basis, model, ts);
      VectorXd y = f;
      if (cfg.signal == "F2") {
        y = add_noise_snr(f, cfg.snr_db, derive_seed(cfg.seed, kNoiseStream, derive_seed(gi, t)));
      }
      truth.push_back(std::move(f));
      observed.push_back(std::move(y));
    }

    for (std::size_t si = 0; si < ns; ++si) {
      const SelectorSpec& spec = cfg.selectors[si];
      const SamplingSet full = run_selector(spec, L, &basis, cfg.sweep_max, cfg.r,
                                            derive_seed(cfg.seed, kSelectStream, gi));
      for (std::size_t pi = 0; pi < np; ++pi) {
        const std::vector<int> S(full.nodes.begin(), full.nodes.begin() + points[pi]);
        double sum = 0.0;
        int ok = 0;
        for (int t = 0; t < cfg.trials; ++t) {
          try {
            const auto rec = consistent_reconstruct(basis, cfg.r, S, gather(observed[t], S));
            const double e = reconstruction_metrics(truth[t], rec.f_hat).mse;
            mse[si][pi].push_back(e);
            sum += e;
            ++ok;
          } catch (const NonUniqueReconstruction&) {
            ++failures[si][pi];
          }
        }
        GraphMseRow row;
        row.graph = gi;
        row.selector = spec.label();
        row.k = spec.k;
        row.sample_size = points[pi];
        row.mean_mse = ok > 0 ? sum / ok : std::numeric_limits<double>::quiet_NaN();
        row.trials = ok;
        result.per_graph.push_back(row);
      }
    }
  }

  for (std::size_t si = 0; si < ns; ++si) {
    for (std::size_t pi = 0; pi < np; ++pi) {
      const auto& v = mse[si][pi];
      MseRow row;
      row.selector = cfg.selectors[si].label();
      row.k = cfg.selectors[si].k;
      row.sample_size = points[pi];
      row.trials = static_cast<int>(v.size());
      row.failures = failures[si][pi];
      if (v.empty()) {
        row.mean_mse = row.std_mse = std::numeric_limits<double>::quiet_NaN();
      } else {
        double sum = 0.0;
        for (double e : v) sum += e;
        row.mean_mse = sum / v.size();
        double ss = 0.0;
        for (double e : v) ss += (e - row.mean_mse) * (e - row.mean_mse);
        row.std_mse = v.size() > 1 ? std::sqrt(ss / (v.size() - 1)) : 0.0;
      }
      result.rows.push_back(row);
    }
  }
  return result;
}

std::vector<BenchRow> run_bench(const ExperimentConfig& cfg) {
  validate_config(cfg);
  std::vector<int> sizes = cfg.bench_sizes;
  if (sizes.empty() || cfg.graph.model == "file") sizes = {cfg.graph.n};
  OperatorParams params;
  params.gamma = cfg.gamma;
  std::vector<BenchRow> rows;
  for (int n : sizes) {
    const Graph g = make_graph(cfg.graph, n, derive_seed(cfg.seed, kBenchStream, n));
    const int nn = g.num_nodes();
    const VariationOperator L = build_variation_operator(g, cfg.kind, params);
    const int m = std::clamp(static_cast<int>(std::lround(cfg.bench_fraction * nn)), 1, nn);
    for (const auto& spec : cfg.selectors) {
      BenchRow row;
      row.selector = spec.label();
      row.k = spec.k;
      row.graph_size = nn;
      row.samples = m;
      if (spec.needs_basis() && nn > cfg.dense_cap) {
        row.skipped = true;
        rows.push_back(row);
        continue;
      }
      std::vector<double> times;
      for (int rep = 0; rep < cfg.bench_repeats; ++rep) {
        GreedyStats stats;
        const auto t0 = std::chrono::steady_clock::now();
        if (spec.needs_basis()) {
          // The basis is part of the cost of a spectral selector.
          const GftBasis basis = dense_gft(L, cfg.dense_cap);
          run_selector(spec, L, &basis, m, std::min(cfg.r, nn), cfg.seed, &stats);
        } else {
          run_selector(spec, L, nullptr, m, std::min(cfg.r, nn), cfg.seed, &stats);
        }
        times.push_back(elapsed(t0));
        row.matvecs = stats.matvecs;
        row.iterations = stats.iterations;
      }
      row.wall_time_seconds = median(times);
      rows.push_back(row);
    }
  }
  return rows;
}

ClassificationResult classify_one_vs_rest(const Graph& g, const std::vector<int>& labels,
                                          const std::vector<int>& S, int r, OperatorKind kind,
                                          int num_classes, const OperatorParams& params) {
  const int n = g.num_nodes();
  if (num_classes < 2) throw InvalidArgument("classify: need at least two classes");
  if (static_cast<int>(labels.size()) != n) throw InvalidArgument("classify: label vector length");
  if (S.empty()) throw InvalidArgument("classify: no labeled nodes");
  for (int v : S) {
    if (v < 0 || v >= n) throw InvalidArgument("classify: sample node out of range");
    if (labels[v] < 0 || labels[v] >= num_classes) {
      throw InvalidArgument("classify: missing or out-of-range label on node " +
                            std::to_string(v));
    }
  }
  const VariationOperator L = build_variation_operator(g, kind, params);
  const GftBasis basis = dense_gft(L);
  if (basis.is_complex) throw InvalidArgument("classify: operator has a complex basis");

  ClassificationResult out;
  Eigen::MatrixXd score(n, num_classes);
  for (int c = 0; c < num_classes; ++c) {
    VectorXd y(S.size());
    bool present = false;
    for (std::size_t i = 0; i < S.size(); ++i) {
      y[i] = labels[S[i]] == c ? 1.0 : 0.0;
      present = present || labels[S[i]] == c;
    }
    if (!present) {
      out.warnings.push_back("class " + std::to_string(c) + " has no labeled node");
      score.col(c).setConstant(-std::numeric_limits<double>::infinity());
      continue;
    }
    score.col(c) = consistent_reconstruct(basis, r, S, y).f_hat;
  }
  out.predicted.resize(n);
  for (int i = 0; i < n; ++i) {
    int best = 0;
    for (int c = 1; c < num_classes; ++c) {
      if (score(i, c) > score(i, best)) best = c;
    }
    out.predicted[i] = best;
  }
  return out;
}

double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
  if (predicted.size() != truth.size() || truth.empty()) {
    throw InvalidArgument("accuracy: length mismatch or empty input");
  }
  std::size_t hit = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hit += predicted[i] == truth[i];
  return static_cast<double>(hit) / truth.size();
}

nlohmann::json to_json(const SamplingSet& s) {
  nlohmann::json cut = nlohmann::json::array();
  for (double c : s.per_step_cutoff) cut.push_back(number_or_null(c));
  return {{"method", s.method}, {"k", s.k}, {"nodes", s.nodes}, {"per_step_cutoff", cut}};
}

SamplingSet sampling_set_from_json(const nlohmann::json& j) {
  SamplingSet s;
  try {
    s.method = j.at("method").get<std::string>();
    s.k = j.value("k", 0);
    s.nodes = j.at("nodes").get<std::vector<int>>();
    if (j.contains("per_step_cutoff")) {
      for (const auto& c : j.at("per_step_cutoff")) {
        s.per_step_cutoff.push_back(c.is_null() ? std::numeric_limits<double>::infinity()
                                                : c.get<double>());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("sampling set json: ") + e.what());
  }
  return s;
}

nlohmann::json to_json(const CutoffEstimate& e) {
  return {{"omega", number_or_null(e.omega)},
          {"sigma", e.sigma},
          {"k", e.k},
          {"iterations", e.iterations},
          {"residual", e.residual},
          {"matvecs", e.matvecs}};
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json sel = nlohmann::json::array();
  for (const auto& s : cfg.selectors) sel.push_back(s.label());
  return {{"graph",
           {{"model", cfg.graph.model},
            {"n", cfg.graph.n},
            {"p", cfg.graph.p},
            {"degree", cfg.graph.degree},
            {"beta", cfg.graph.beta},
            {"m0", cfg.graph.m0},
            {"m", cfg.graph.m},
            {"path", cfg.graph.path},
            {"instances", cfg.graph.instances}}},
          {"operator", {{"kind", to_string(cfg.kind)}, {"gamma", cfg.gamma}}},
          {"signal",
           {{"model", cfg.signal},
            {"r", cfg.r},
            {"snr_db", number_or_null(cfg.snr_db)},
            {"decay", cfg.decay}}},
          {"selectors", sel},
          {"sweep",
           {{"min", cfg.sweep_min},
            {"max", cfg.sweep_max},
            {"step", cfg.sweep_step},
            {"trials", cfg.trials}}},
          {"run", {{"seed", cfg.seed}, {"output_dir", cfg.output_dir}, {"dense_cap", cfg.dense_cap}}},
          {"bench",
           {{"sizes", cfg.bench_sizes},
            {"fraction", cfg.bench_fraction},
            {"repeats", cfg.bench_repeats}}}};
}

void write_mse_csv(const std::vector<MseRow>& rows, std::ostream& out) {
  out << "selector,k,sample_size,mean_mse,std_mse,trials,failures\n";
  for (const auto& r : rows) {
    out << r.selector << ',' << r.k << ',' << r.sample_size << ',' << fmt(r.mean_mse) << ','
        << fmt(r.std_mse) << ',' << r.trials << ',' << r.failures << '\n';
  }
}

void write_graph_mse_csv(const std::vector<GraphMseRow>& rows, std::ostream& out) {
  out << "graph,selector,k,sample_size,mean_mse,trials\n";
  for (const auto& r : rows) {
    out << r.graph << ',' << r.selector << ',' << r.k << ',' << r.sample_size << ','
        << fmt(r.mean_mse) << ',' << r.trials << '\n';
  }
}

void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out) {
  out << "selector,k,graph_size,samples,wall_time_seconds,matvecs,iterations,skipped\n";
  for (const auto& r : rows) {
    out << r.selector << ',' << r.k << ',' << r.graph_size << ',' << r.samples << ','
        << fmt(r.wall_time_seconds) << ',' << r.matvecs << ',' << r.iterations << ','
        << (r.skipped ? 1 : 0) << '\n';
  }
}

std::vector<MseRow> read_mse_csv(std::istream& in) {
  std::vector<MseRow> rows;
  std::string line;
  long lineno = 0;
  if (!std::getline(in, line)) throw ParseError("missing header", 1);
  ++lineno;
  if (trim(line) != "selector,k,sample_size,mean_mse,std_mse,trials,failures") {
    throw ParseError("unexpected header", lineno);
  }
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto f = split(trim(line), ',');
    if (f.size() != 7) throw ParseError("expected 7 fields", lineno);
    try {
      MseRow r;
      r.selector = f[0];
      r.k = std::stoi(f[1]);
      r.sample_size = std::stoi(f[2]);
      r.mean_mse = std::stod(f[3]);
      r.std_mse = std::stod(f[4]);
      r.trials = std::stoi(f[5]);
      r.failures = std::stoi(f[6]);
      rows.push_back(r);
    } catch (const std::exception&) {
      throw ParseError("bad number", lineno);
    }
  }
  return rows;
}

void write_experiment_outputs(const ExperimentConfig& cfg, const MseResult& result,
                              double seconds) {
  const std::filesystem::path dir(cfg.output_dir.empty() ? "." : cfg.output_dir);
  std::filesystem::create_directories(dir);
  {
    auto out = open_out(dir / "mse.csv");
    write_mse_csv(result.rows, out);
  }
  {
    auto out = open_out(dir / "mse_per_graph.csv");
    write_graph_mse_csv(result.per_graph, out);
  }
  // Wall time lives apart from the manifest so reruns stay byte-identical.
  nlohmann::json manifest = {{"library_version", kVersion},
                             {"command", "experiment"},
                             {"config", to_json(cfg)},
                             {"master_seed", cfg.seed},
                             {"outputs", {"mse.csv", "mse_per_graph.csv"}},
                             {"timings", "timings.json"}};
  open_out(dir / "manifest.json") << manifest.dump(2) << '\n';
  open_out(dir / "timings.json") << nlohmann::json{{"total_seconds", seconds}}.dump(2) << '\n';
}

void write_bench_outputs(const ExperimentConfig& cfg, const std::vector<BenchRow>& rows,
                         double seconds) {
  const std::filesystem::path dir(cfg.output_dir.empty() ? "." : cfg.output_dir);
  std::filesystem::create_directories(dir);
  {
    auto out = open_out(dir / "bench.csv");
    write_bench_csv(rows, out);
  }
  nlohmann::json manifest = {{"library_version", kVersion},
                             {"command", "bench"},
                             {"config", to_json(cfg)},
                             {"master_seed", cfg.seed},
                             {"outputs", {"bench.csv"}},
                             {"timings", "timings.json"}};
  open_out(dir / "manifest.json") << manifest.dump(2) << '\n';
  open_out(dir / "timings.json") << nlohmann::json{{"total_seconds", seconds}}.dump(2) << '\n';
}

std::string library_version() { return kVersion; }

}  // namespace gsp
