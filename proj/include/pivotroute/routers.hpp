#ifndef PIVOTROUTE_ROUTERS_HPP
#define PIVOTROUTE_ROUTERS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pivotroute/langdb.hpp"
#include "pivotroute/lstm.hpp"
#include "pivotroute/pathspace.hpp"

namespace pivotroute {

struct RoutingResult {
  std::string source;
  std::string target;
  std::string method;
  Path chosen;
  std::optional<double> predicted;  // BLEU points
  std::optional<double> actual;     // BLEU points
};

/// A path paired with a score, as produced by the scoring routers.
struct ScoredPath {
  Path path;
  double score = 0.0;
};

/// Path -> measured (or oracle) BLEU.
using PathLabels = std::map<Path, double>;
/// Language code -> number of appearances as a pivot in the training labels.
using PivotCounts = std::map<std::string, std::size_t>;
/// Branch -> pivot language code.
using PivotMap = std::map<std::string, std::string>;

/// Index of the best entry: highest score, then fewer hops, then path text.
std::size_t argmax_with_ties(const std::vector<ScoredPath>& scored);
/// Sorts best first under the same order.
void rank_with_ties(std::vector<ScoredPath>& scored);

Path route_direct(const std::string& x, const std::string& y);

/// Uniform choice, deterministic per seed.
Path route_random(const PathSet& candidates, std::uint64_t seed);

/// Per branch the language with the largest mono_size; ties go to the
/// lexicographically smallest code.
PivotMap build_pivot_map(const LanguageRegistry& registry);

/// x -> P(x) -> P(y) -> y with repeated neighbours collapsed.
Path route_prior_pivot(const LanguageRegistry& registry, const std::string& x, const std::string& y,
                       const PivotMap& pivots);

/// Mean of a path's hop scores in BLEU points.
double hop_average(const QualityMatrix& matrix, const Path& path, bool supervised_only_middle = true);
ScoredPath route_hop_average(const PathSet& candidates, const QualityMatrix& matrix);

/// Candidates whose pivots all appear at least min_count times in the
/// training labels; the direct path is always kept.
PathSet filter_rare_pivots(const PathSet& candidates, const PivotCounts& pivot_counts, std::size_t min_count);

/// Every surviving candidate with its predicted score (BLEU points), best first.
std::vector<ScoredPath> rank_ltr(const PathSet& candidates, const QualityMatrix& matrix, const LtrModel<double>& model,
                                 const PivotCounts& pivot_counts, std::size_t pivot_min_count = 10);
ScoredPath route_ltr(const PathSet& candidates, const QualityMatrix& matrix, const LtrModel<double>& model,
                     const PivotCounts& pivot_counts, std::size_t pivot_min_count = 10);

/// Best candidate by label; throws if any candidate is unlabeled.
ScoredPath route_ground_truth(const PathSet& candidates, const PathLabels& labels);

}  // namespace pivotroute

#endif
