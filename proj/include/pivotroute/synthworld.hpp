#ifndef PIVOTROUTE_SYNTHWORLD_HPP
#define PIVOTROUTE_SYNTHWORLD_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pivotroute/langdb.hpp"
#include "pivotroute/pathspace.hpp"
#include "pivotroute/routers.hpp"

namespace pivotroute {

/// Knobs of a synthetic language world. One-hop quality is
///   base_min + (base_max - base_min) * (w * r_s * r_t + (1 - w) * v) [+ affinity if same branch]
/// where r is a language's resource level in [0,1] (log-scaled monolingual
/// size), v ~ U(0,1) per edge and w = resource_weight.
struct WorldConfig {
  std::size_t num_languages = 20;
  std::size_t num_branches = 4;
  std::uint64_t seed = 0;
  double base_min = 0.0;
  double base_max = 55.0;
  double resource_weight = 0.8;
  double branch_affinity = 65.0;
  /// Monolingual sizes span 10^5 .. 10^(5 + size_spread) sentences.
  double size_spread = 3.0;
  /// Relative sigma of the per-path multiplicative noise on multi-hop paths.
  double noise_sigma = 0.1;

  void validate() const;
  bool operator==(const WorldConfig&) const = default;
};

/// Ground-truth BLEU of any path in a world: one-hop paths read the matrix;
/// longer paths compose normalized hop scores by product, then apply a
/// seeded per-path multiplicative noise and clamp to [0,100].
class PathOracle {
public:
  PathOracle(QualityMatrix matrix, std::uint64_t seed, double noise_sigma);

  double label(const Path& path) const;
  PathLabels label_all(const PathSet& candidates) const;

  const QualityMatrix& matrix() const { return matrix_; }
  std::uint64_t seed() const { return seed_; }
  double noise_sigma() const { return noise_sigma_; }

private:
  QualityMatrix matrix_;
  std::uint64_t seed_;
  double noise_sigma_;
};

struct World {
  WorldConfig config;
  QualityMatrix matrix;
  PathOracle oracle;

  const LanguageRegistry& registry() const { return matrix.registry(); }
};

World gen_world(const WorldConfig& config);

/// The oracle's per-path noise draw; exposed so tests can recompute labels.
double path_noise(std::uint64_t seed, const Path& path, double noise_sigma);

struct LanguagePair {
  std::string source;
  std::string target;

  auto operator<=>(const LanguagePair&) const = default;
};

struct DatasetConfig {
  double dev_frac = 0.05;
  double test_frac = 0.10;
  double train_path_frac = 0.10;
  std::uint64_t seed = 1;
};

struct RoutingDataset {
  std::vector<LanguagePair> train_pairs;
  std::vector<LanguagePair> dev_pairs;
  std::vector<LanguagePair> test_pairs;
  /// Sampled paths of train pairs and every candidate of dev/test pairs.
  PathLabels labels;
  /// Pivot appearances among the sampled train paths.
  PivotCounts pivot_counts;

  bool operator==(const RoutingDataset&) const = default;
};

/// Every ordered distant pair in registry order.
std::vector<LanguagePair> distant_pairs(const LanguageRegistry& registry);

/// Candidate paths of a pair with every other registry language as a pivot.
PathSet candidate_paths(const LanguageRegistry& registry, const LanguagePair& pair);

/// Ordered-pair count of a split: frac * total rounded to the nearest even number.
std::size_t split_size(std::size_t total_ordered_pairs, double frac);

RoutingDataset build_dataset(const LanguageRegistry& registry, const PathOracle& oracle, const DatasetConfig& config);

/// Pivot appearances over a set of labeled paths.
PivotCounts count_pivots(const PathLabels& labels, const std::set<LanguagePair>& pairs);

/// Copy of matrix whose edges in `boost` carry the given supervised score.
/// Keys must lie in pivot_set x pivot_set; a boost below the unsupervised
/// score is rejected.
QualityMatrix apply_supervised_overlay(const QualityMatrix& matrix, const std::set<std::string>& pivot_set,
                                       const std::map<std::pair<std::string, std::string>, double>& boost);

/// Boost map raising every ordered edge among pivot_set by delta BLEU (capped at 100).
std::map<std::pair<std::string, std::string>, double> uniform_boost(const QualityMatrix& matrix,
                                                                    const std::set<std::string>& pivot_set,
                                                                    double delta);

/// `path<TAB>bleu` rows in path order.
std::string format_labels(const PathLabels& labels);
PathLabels parse_labels(const std::string& text);

}  // namespace pivotroute

#endif
