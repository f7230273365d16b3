// gsp_cli: graph generation, sampling set selection, reconstruction and the
// experiment drivers. Exit codes: 0 ok, 2 bad input or config, 3 numeric failure.

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "gsp/errors.hpp"
#include "gsp/experiments.hpp"
#include "gsp/generators.hpp"
#include "gsp/io.hpp"
#include "gsp/knn.hpp"
#include "gsp/reconstruct.hpp"
#include "gsp/sampling.hpp"
#include "gsp/spectral.hpp"
#include "gsp/variation.hpp"

using namespace gsp;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

std::ofstream open_file(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path);
  return out;
}

void write_dense_matrix_market(const Eigen::MatrixXd& m, std::ostream& out) {
  out << "%%MatrixMarket matrix array real general\n" << m.rows() << ' ' << m.cols() << '\n';
  out << std::setprecision(17);
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) out << m(i, j) << '\n';
  }
}

// node,value rows for the sampled nodes only; header optional.
std::map<int, double> read_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::map<int, double> out;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError("expected node,value", lineno);
    const std::string a = line.substr(0, comma), b = line.substr(comma + 1);
    if (lineno == 1 && a.find("node") != std::string::npos) continue;
    try {
      const int node = std::stoi(a);
      if (!out.emplace(node, std::stod(b)).second) throw ParseError("repeated node", lineno);
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      throw ParseError("bad number", lineno);
    }
  }
  return out;
}

void add_graph_model_options(CLI::App* cmd, GraphSpec& spec) {
  cmd->add_option("--model", spec.model, "erdos_renyi | small_world | barabasi_albert")
      ->check(CLI::IsMember({"erdos_renyi", "small_world", "barabasi_albert"}));
  cmd->add_option("--n", spec.n, "Number of nodes")->required();
  cmd->add_option("--p", spec.p, "Edge probability (erdos_renyi)");
  cmd->add_option("--degree", spec.degree, "Ring degree (small_world)");
  cmd->add_option("--beta", spec.beta, "Rewiring probability (small_world)");
  cmd->add_option("--m0", spec.m0, "Seed clique size (barabasi_albert)");
  cmd->add_option("--m", spec.m, "Edges per new node (barabasi_albert)");
}

Graph generate(const GraphSpec& spec, std::uint64_t seed) {
  if (spec.model == "erdos_renyi") return erdos_renyi(spec.n, spec.p, seed);
  if (spec.model == "small_world") return small_world(spec.n, spec.degree, spec.beta, seed);
  return barabasi_albert(spec.n, spec.m0, spec.m, seed);
}

int run(int argc, char** argv) {
  CLI::App app{"Sampling set selection and reconstruction for graph signals"};
  app.set_version_flag("--version", library_version());
  app.require_subcommand(1);

  // generate-graph
  GraphSpec gen_spec;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  auto* gen = app.add_subcommand("generate-graph", "Write a random graph as Matrix Market");
  add_graph_model_options(gen, gen_spec);
  gen->add_option("--seed", gen_seed, "Random seed");
  gen->add_option("--out", gen_out, "Output .mtx path")->required();

  // build-operator
  std::string op_graph, op_kind = "combinatorial", op_out;
  double gamma = 0.5;
  auto* bop = app.add_subcommand("build-operator", "Dense export of a variation operator");
  bop->add_option("--graph", op_graph, "Graph .mtx")->required();
  bop->add_option("--operator", op_kind, "Operator kind");
  bop->add_option("--gamma", gamma, "Hub-authority mixing weight");
  bop->add_option("--out", op_out, "Output .mtx (array format)")->required();

  // select
  std::string sel_method, sel_graph, sel_kind = "combinatorial", sel_out;
  int sel_k = 0, sel_m = 0, sel_r = 0, sel_cap = kDefaultDenseCap;
  std::uint64_t sel_seed = 1;
  auto* sel = app.add_subcommand("select", "Choose a sampling set");
  sel->add_option("--method", sel_method, "greedy_proxy | e_opt | a_opt | m2 | gauss_pivot | random")
      ->required();
  sel->add_option("--k", sel_k, "Proxy order for greedy_proxy");
  sel->add_option("--num-samples", sel_m, "Sampling set size")->required();
  sel->add_option("--graph", sel_graph, "Graph .mtx")->required();
  sel->add_option("--operator", sel_kind, "Operator kind");
  sel->add_option("--gamma", gamma, "Hub-authority mixing weight");
  sel->add_option("--r", sel_r, "Bandwidth count for e_opt / a_opt");
  sel->add_option("--seed", sel_seed, "Random seed");
  sel->add_option("--dense-cap", sel_cap, "Largest graph for dense spectral selectors");
  sel->add_option("--out", sel_out, "Output JSON (stdout if omitted)");

  // reconstruct
  std::string rec_graph, rec_kind = "combinatorial", rec_samples, rec_set, rec_out,
                         rec_method = "consistent";
  int rec_r = 0, rec_power = 2;
  auto* rec = app.add_subcommand("reconstruct", "Recover a signal from samples");
  rec->add_option("--graph", rec_graph, "Graph .mtx")->required();
  rec->add_option("--operator", rec_kind, "Operator kind");
  rec->add_option("--gamma", gamma, "Hub-authority mixing weight");
  rec->add_option("--method", rec_method, "consistent | variational")
      ->check(CLI::IsMember({"consistent", "variational"}));
  rec->add_option("--basis-r", rec_r, "Bandwidth count r (consistent)");
  rec->add_option("--power", rec_power, "Operator power m (variational)");
  rec->add_option("--samples", rec_samples, "node,value CSV of observed samples")->required();
  rec->add_option("--set", rec_set, "Sampling set JSON; defaults to the sampled nodes");
  rec->add_option("--out", rec_out, "Output node,value CSV")->required();

  // experiment / bench
  std::string exp_config, exp_out;
  auto* exp = app.add_subcommand("experiment", "Run an MSE sweep from a config file");
  exp->add_option("--config", exp_config, "Config file")->required();
  exp->add_option("--out", exp_out, "Override the output directory");
  auto* bench = app.add_subcommand("bench", "Time the selectors from a config file");
  bench->add_option("--config", exp_config, "Config file")->required();
  bench->add_option("--out", exp_out, "Override the output directory");

  // classify
  std::string cls_features, cls_labels, cls_kind = "combinatorial", cls_method = "greedy_proxy",
                                         cls_out;
  int cls_knn = 10, cls_num = 0, cls_r = 0, cls_k = 8;
  std::uint64_t cls_seed = 1;
  auto* cls = app.add_subcommand("classify", "One-vs-rest classification on a k-NN graph");
  cls->add_option("--features", cls_features, "Feature CSV, one point per row")->required();
  cls->add_option("--labels", cls_labels, "Label CSV, one per point; negative means unknown")
      ->required();
  cls->add_option("--k-nn", cls_knn, "Neighbours per point");
  cls->add_option("--num-labels", cls_num, "Number of nodes to label")->required();
  cls->add_option("--r", cls_r, "Bandwidth count r")->required();
  cls->add_option("--method", cls_method, "Selector for the labeled nodes");
  cls->add_option("--k", cls_k, "Proxy order for greedy_proxy");
  cls->add_option("--operator", cls_kind, "Operator kind");
  cls->add_option("--seed", cls_seed, "Random seed");
  cls->add_option("--out", cls_out, "Output node,label CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  OperatorParams params;
  params.gamma = gamma;

  if (*gen) {
    save_graph(generate(gen_spec, gen_seed), gen_out);
  } else if (*bop) {
    const Graph g = load_graph(op_graph);
    const auto L = build_variation_operator(g, operator_kind_from_string(op_kind), params);
    auto out = open_file(op_out);
    write_dense_matrix_market(L.to_dense(), out);
  } else if (*sel) {
    const SelectorSpec spec = sel_method == "greedy_proxy"
                                  ? parse_selector("greedy_proxy:" + std::to_string(sel_k))
                                  : parse_selector(sel_method);
    if ((spec.name == "e_opt" || spec.name == "a_opt") && sel_r < 1) {
      throw ConfigError(spec.name + " needs --r");
    }
    const Graph g = load_graph(sel_graph);
    const auto L = build_variation_operator(g, operator_kind_from_string(sel_kind), params);
    std::optional<GftBasis> basis;
    if (spec.needs_basis()) basis = dense_gft(L, sel_cap);
    if (spec.name == "m2" && !basis->orthonormal) {
      throw ConfigError("m2 needs an orthonormal basis");
    }
    const SamplingSet s =
        run_selector(spec, L, basis ? &*basis : nullptr, sel_m, sel_r, sel_seed);
    const std::string text = to_json(s).dump(2);
    if (sel_out.empty()) {
      std::cout << text << '\n';
    } else {
      open_file(sel_out) << text << '\n';
    }
  } else if (*rec) {
    const Graph g = load_graph(rec_graph);
    const auto L = build_variation_operator(g, operator_kind_from_string(rec_kind), params);
    const auto samples = read_samples(rec_samples);
    std::vector<int> S;
    if (!rec_set.empty()) {
      std::ifstream in(rec_set);
      if (!in) throw InvalidArgument("cannot open " + rec_set);
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("sampling set json: ") + e.what());
      }
      S = sampling_set_from_json(j).nodes;
    } else {
      for (const auto& [node, value] : samples) S.push_back(node);
    }
    Eigen::VectorXd y(S.size());
    for (std::size_t i = 0; i < S.size(); ++i) {
      const auto it = samples.find(S[i]);
      if (it == samples.end()) {
        throw InvalidArgument("no sample value for node " + std::to_string(S[i]));
      }
      y[i] = it->second;
    }
    ReconstructionResult res;
    if (rec_method == "consistent") {
      if (rec_r < 1) throw ConfigError("consistent reconstruction needs --basis-r");
      res = consistent_reconstruct(dense_gft(L), rec_r, S, y);
    } else {
      res = variational_reconstruct(L, rec_power, S, y);
    }
    save_signal(res.f_hat, rec_out);
    nlohmann::json meta = {{"method", res.method},      {"power", res.power},
                           {"residual", res.residual},  {"condition_hint", res.condition_hint},
                           {"iterations", res.iterations}, {"samples", S.size()}};
    open_file(rec_out + ".json") << meta.dump(2) << '\n';
  } else if (*exp || *bench) {
    ExperimentConfig cfg = load_config(exp_config);
    if (!exp_out.empty()) cfg.output_dir = exp_out;
    validate_config(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    if (*exp) {
      const MseResult result = run_mse_experiment(cfg);
      const double dt =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      write_experiment_outputs(cfg, result, dt);
    } else {
      const auto rows = run_bench(cfg);
      const double dt =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      write_bench_outputs(cfg, rows, dt);
      write_bench_csv(rows, std::cout);
    }
  } else if (*cls) {
    const FeatureMatrix x = load_features(cls_features);
    const std::vector<int> labels = load_labels(cls_labels);
    if (static_cast<Eigen::Index>(labels.size()) != x.rows()) {
      throw InvalidArgument("label count differs from the number of feature rows");
    }
    int num_classes = 0;
    for (int c : labels) num_classes = std::max(num_classes, c + 1);
    const Graph g = knn_graph(x, cls_knn);
    const OperatorKind kind = operator_kind_from_string(cls_kind);
    const auto L = build_variation_operator(g, kind, params);
    const SelectorSpec spec = cls_method == "greedy_proxy"
                                  ? parse_selector("greedy_proxy:" + std::to_string(cls_k))
                                  : parse_selector(cls_method);
    std::optional<GftBasis> basis;
    if (spec.needs_basis()) basis = dense_gft(L);
    const SamplingSet s =
        run_selector(spec, L, basis ? &*basis : nullptr, cls_num, cls_r, cls_seed);
    const auto res = classify_one_vs_rest(g, labels, s.nodes, cls_r, kind, num_classes, params);
    for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';
    std::vector<int> pred, truth;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] < 0) continue;
      pred.push_back(res.predicted[i]);
      truth.push_back(labels[i]);
    }
    if (!truth.empty()) std::cout << "accuracy " << accuracy(pred, truth) << '\n';
    if (!cls_out.empty()) {
      auto out = open_file(cls_out);
      out << "node,label\n";
      for (std::size_t i = 0; i < res.predicted.size(); ++i) {
        out << i << ',' << res.predicted[i] << '\n';
      }
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const NumericFailure& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitConfig;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
