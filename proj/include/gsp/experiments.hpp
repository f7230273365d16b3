#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "gsp/generators.hpp"
#include "gsp/sampling.hpp"
#include "gsp/variation.hpp"

namespace gsp {

struct GraphSpec {
  std::string model = "erdos_renyi";  // erdos_renyi | small_world | barabasi_albert | file
  int n = 100;
  double p = 0.05;
  int degree = 4;
  double beta = 0.1;
  int m0 = 4;
  int m = 4;
  std::string path;
  int instances = 1;
};

struct SelectorSpec {
  std::string name;  // greedy_proxy | e_opt | a_opt | m2 | gauss_pivot | random
  int k = 0;         // greedy_proxy only

  std::string label() const;
  bool needs_basis() const;
};

// "greedy_proxy:8", "greedy_proxy(8)" or a bare method name.
SelectorSpec parse_selector(const std::string& text);

struct ExperimentConfig {
  GraphSpec graph;
  OperatorKind kind = OperatorKind::combinatorial;
  double gamma = 0.5;
  std::string signal = "F1";  // F1 exact, F2 exact plus noise, F3 approximate
  int r = 10;
  double snr_db = 20.0;
  double decay = 4.0;
  std::vector<SelectorSpec> selectors;
  int sweep_min = 1;
  int sweep_max = 1;
  int sweep_step = 1;
  int trials = 50;
  std::uint64_t seed = 1;
  std::string output_dir;
  int dense_cap = 3000;
  // Benchmark section.
  std::vector<int> bench_sizes;
  double bench_fraction = 0.05;
  int bench_repeats = 3;
};

// INI-style text: [section] headers and key = value lines, '#' comments.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);
// Throws ConfigError on any incompatible combination. Cheap; runs before work.
void validate_config(const ExperimentConfig& cfg);

struct MseRow {
  std::string selector;
  int k = 0;
  int sample_size = 0;
  double mean_mse = 0.0;
  double std_mse = 0.0;
  int trials = 0;    // successful reconstructions aggregated
  int failures = 0;  // rank-deficient U_SR
};

struct GraphMseRow {
  int graph = 0;
  std::string selector;
  int k = 0;
  int sample_size = 0;
  double mean_mse = 0.0;
  int trials = 0;
};

struct MseResult {
  std::vector<MseRow> rows;
  std::vector<GraphMseRow> per_graph;
};

MseResult run_mse_experiment(const ExperimentConfig& cfg);

struct BenchRow {
  std::string selector;
  int k = 0;
  int graph_size = 0;
  int samples = 0;
  double wall_time_seconds = 0.0;
  long matvecs = 0;
  long iterations = 0;
  bool skipped = false;  // dense selector above the cap
};

std::vector<BenchRow> run_bench(const ExperimentConfig& cfg);

// Runs one selector. `basis` may be null for selectors that do not need it.
SamplingSet run_selector(const SelectorSpec& spec, const VariationOperator& L,
                         const GftBasis* basis, int m, int r, std::uint64_t seed,
                         GreedyStats* stats = nullptr);

struct ClassificationResult {
  std::vector<int> predicted;
  std::vector<std::string> warnings;
};

// labels: class ids >= 0, read on S only. Classes are 0 .. num_classes - 1.
ClassificationResult classify_one_vs_rest(const Graph& g, const std::vector<int>& labels,
                                          const std::vector<int>& S, int r, OperatorKind kind,
                                          int num_classes, const OperatorParams& params = {});

double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth);

nlohmann::json to_json(const SamplingSet& s);
SamplingSet sampling_set_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CutoffEstimate& e);
nlohmann::json to_json(const ExperimentConfig& cfg);

void write_mse_csv(const std::vector<MseRow>& rows, std::ostream& out);
void write_graph_mse_csv(const std::vector<GraphMseRow>& rows, std::ostream& out);
void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out);
std::vector<MseRow> read_mse_csv(std::istream& in);

// Writes the result CSVs plus manifest.json into cfg.output_dir.
void write_experiment_outputs(const ExperimentConfig& cfg, const MseResult& result,
                              double seconds);
void write_bench_outputs(const ExperimentConfig& cfg, const std::vector<BenchRow>& rows,
                         double seconds);

std::string library_version();

}  // namespace gsp
