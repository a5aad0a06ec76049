#ifndef PIVOTROUTE_PIPELINE_HPP
#define PIVOTROUTE_PIPELINE_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pivotroute/evaluator.hpp"
#include "pivotroute/synthworld.hpp"
#include "pivotroute/trainer.hpp"

namespace pivotroute {

namespace fs = std::filesystem;

/// Method column order of every report.
inline const std::vector<std::string> kMethods{"DT", "RR", "HA", "PP", "LTR", "GT"};

/// Parses "DT,GT" into canonical order; throws on unknown names.
std::vector<std::string> parse_methods(const std::string& list);

// Every subcommand derives its streams from one seed:
// world = seed, dataset sampling = seed + 1, model init and shuffling = seed + 2,
// random router = seed + 3.
inline std::uint64_t world_seed(std::uint64_t seed) { return seed; }
inline std::uint64_t dataset_seed(std::uint64_t seed) { return seed + 1; }
inline std::uint64_t train_seed(std::uint64_t seed) { return seed + 2; }
inline std::uint64_t router_seed(std::uint64_t seed) { return seed + 3; }

/// Files of a prepared experiment directory.
struct DataFiles {
  fs::path dir;
  fs::path languages() const { return dir / "languages.tsv"; }
  fs::path matrix() const { return dir / "matrix.tsv"; }
  fs::path labels() const { return dir / "labels.tsv"; }
  fs::path manifest() const { return dir / "dataset.json"; }
};

struct Manifest {
  std::optional<WorldConfig> world;  // absent for externally supplied data
  DatasetConfig dataset;
  std::vector<LanguagePair> train_pairs;
  std::vector<LanguagePair> dev_pairs;
  std::vector<LanguagePair> test_pairs;
  std::vector<Path> train_paths;
};

std::string format_manifest(const Manifest& manifest);
Manifest parse_manifest(const std::string& text);

/// Everything a prepared directory holds, loaded and cross-checked.
struct Experiment {
  QualityMatrix matrix;
  PathLabels labels;
  Manifest manifest;
  PivotCounts pivot_counts;  // over manifest.train_paths
};

Experiment load_experiment(const fs::path& dir);

struct GenOptions {
  WorldConfig world;
  DatasetConfig dataset;
  fs::path out;
};

/// Writes languages.tsv, matrix.tsv, labels.tsv and dataset.json.
void cmd_gen(const GenOptions& options);

struct TrainOptions {
  fs::path data;
  fs::path checkpoint;
  fs::path report;
  TrainConfig config;
  std::size_t pivot_min_count = 10;
};

TrainReport cmd_train(const TrainOptions& options);

struct EvalOptions {
  fs::path data;
  fs::path checkpoint;
  fs::path out;
  std::vector<std::string> methods = kMethods;
  std::uint64_t seed = 0;
  std::size_t pivot_min_count = 10;
  bool supervised_overlay = false;
  double overlay_boost = 20.0;
};

struct EvalResult {
  std::vector<MethodReport> reports;
  std::array<double, 3> gt_length_distribution{};
  std::vector<MethodReport> supervised_reports;  // filled with --supervised-overlay
};

/// Writes report.tsv, cdf_<method>.csv, routes.tsv and gt_lengths.tsv; with
/// the overlay also the *_sup variants.
EvalResult cmd_eval(const EvalOptions& options);

/// In-memory evaluation used by cmd_eval.
std::vector<MethodReport> evaluate_methods(const QualityMatrix& matrix, const std::vector<LanguagePair>& pairs,
                                           const std::function<PathLabels(const PathSet&)>& labeler,
                                           const LtrModel<double>* model, const PivotCounts& pivot_counts,
                                           const std::vector<std::string>& methods, std::uint64_t seed,
                                           std::size_t pivot_min_count);

struct RouteOptions {
  fs::path data;
  std::optional<fs::path> checkpoint;
  std::string source;
  std::string target;
  std::vector<std::string> methods = kMethods;
  std::uint64_t seed = 0;
  std::size_t pivot_min_count = 10;
};

std::vector<RoutingResult> cmd_route(const RouteOptions& options);

/// Text table of count_paths and estimate_eval_cost.
std::string cmd_count(std::uint64_t num_languages, double minutes_per_path);

}  // namespace pivotroute

#endif
