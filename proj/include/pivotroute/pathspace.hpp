#ifndef PIVOTROUTE_PATHSPACE_HPP
#define PIVOTROUTE_PATHSPACE_HPP

#include <compare>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "pivotroute/langdb.hpp"

namespace pivotroute {

inline constexpr std::size_t kMaxHops = 3;

/// Ordered language sequence source -> pivots... -> target, 1 to 3 hops.
class Path {
public:
  Path() = default;
  /// Throws Error unless 2..4 languages with no equal neighbours.
  explicit Path(std::vector<std::string> langs);

  /// Parses the "da->en->es->gl" form.
  static Path parse(const std::string& text);

  const std::vector<std::string>& langs() const { return langs_; }
  std::size_t hops() const { return langs_.size() - 1; }
  const std::string& source() const { return langs_.front(); }
  const std::string& target() const { return langs_.back(); }
  std::vector<std::string> pivots() const { return {langs_.begin() + 1, langs_.end() - 1}; }

  std::string str() const;

  bool operator==(const Path&) const = default;
  auto operator<=>(const Path&) const = default;

private:
  std::vector<std::string> langs_;
};

/// Deterministic preference order used for every tie: fewer hops first, then
/// lexicographic on the textual form. Returns true when a precedes b.
bool tie_precedes(const Path& a, const Path& b);

struct PathSet {
  std::string source;
  std::string target;
  std::vector<Path> paths;
  /// Supervised edges only count at the middle hop of a 3-hop path.
  bool supervised_only_middle = true;
};

/// All paths x -> y through 0..max_pivots mutually distinct pivots drawn
/// from pivot_pool, ordered by hop count then pivot codes.
PathSet enumerate_paths(const std::string& x, const std::string& y, const std::set<std::string>& pivot_pool,
                        int max_pivots = 2, bool supervised_only_middle = true);

/// Number of paths with at most max_hops hops through a pool of P pivots.
std::uint64_t count_paths(std::uint64_t pool_size, int max_hops = 3);

/// Back-of-envelope cost in GPU-days of scoring every path of every ordered
/// pair of an M-language world: M(M-1) pairs times M(M-1) paths per pair.
double estimate_eval_cost(std::uint64_t num_languages, double minutes_per_path = 20.0);

/// Score of hop `hop` (0-based) of `path`. A supervised edge contributes its
/// supervised score only as the middle hop of a 3-hop path when
/// supervised_only_middle is set; otherwise the unsupervised score.
double hop_score(const QualityMatrix& matrix, const Path& path, std::size_t hop, bool supervised_only_middle = true);
std::vector<double> hop_scores(const QualityMatrix& matrix, const Path& path, bool supervised_only_middle = true);

}  // namespace pivotroute

#endif
