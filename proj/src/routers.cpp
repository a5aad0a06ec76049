#include "pivotroute/routers.hpp"

#include <algorithm>
#include <random>

namespace pivotroute {

namespace {

bool better(const ScoredPath& a, const ScoredPath& b) {
  if (a.score != b.score) return a.score > b.score;
  return tie_precedes(a.path, b.path);
}

}  // namespace

std::size_t argmax_with_ties(const std::vector<ScoredPath>& scored) {
  if (scored.empty()) throw Error("no candidate paths");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scored.size(); ++i)
    if (better(scored[i], scored[best])) best = i;
  return best;
}

void rank_with_ties(std::vector<ScoredPath>& scored) { std::stable_sort(scored.begin(), scored.end(), better); }

Path route_direct(const std::string& x, const std::string& y) {
  if (x == y) throw Error("route_direct: source equals target (" + x + ")");
  return Path({x, y});
}

Path route_random(const PathSet& candidates, std::uint64_t seed) {
  if (candidates.paths.empty()) throw Error("route_random: no candidate paths");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, candidates.paths.size() - 1);
  return candidates.paths[pick(rng)];
}

PivotMap build_pivot_map(const LanguageRegistry& registry) {
  PivotMap map;
  for (const auto& branch : registry.branch_set()) {
    const Language* best = nullptr;
    for (const auto& lang : registry.languages()) {
      if (lang.branch != branch) continue;
      if (!best || lang.mono_size > best->mono_size || (lang.mono_size == best->mono_size && lang.code < best->code))
        best = &lang;
    }
    if (!best) throw Error("build_pivot_map: empty branch " + branch);
    map[branch] = best->code;
  }
  return map;
}

Path route_prior_pivot(const LanguageRegistry& registry, const std::string& x, const std::string& y,
                       const PivotMap& pivots) {
  if (x == y) throw Error("route_prior_pivot: source equals target (" + x + ")");
  auto pivot_of = [&](const std::string& code) {
    const auto& branch = registry.at(code).branch;
    auto it = pivots.find(branch);
    if (it == pivots.end()) throw Error("route_prior_pivot: no pivot for branch " + branch);
    return it->second;
  };
  const std::vector<std::string> raw{x, pivot_of(x), pivot_of(y), y};
  std::vector<std::string> langs;
  for (const auto& l : raw)
    if (langs.empty() || langs.back() != l) langs.push_back(l);
  return Path(std::move(langs));
}

double hop_average(const QualityMatrix& matrix, const Path& path, bool supervised_only_middle) {
  const auto hops = hop_scores(matrix, path, supervised_only_middle);
  double sum = 0.0;
  for (double h : hops) sum += h;
  return sum / static_cast<double>(hops.size());
}

ScoredPath route_hop_average(const PathSet& candidates, const QualityMatrix& matrix) {
  if (candidates.paths.empty()) throw Error("route_hop_average: no candidate paths");
  std::vector<ScoredPath> scored;
  scored.reserve(candidates.paths.size());
  for (const auto& p : candidates.paths)
    scored.push_back({p, hop_average(matrix, p, candidates.supervised_only_middle)});
  return scored[argmax_with_ties(scored)];
}

PathSet filter_rare_pivots(const PathSet& candidates, const PivotCounts& pivot_counts, std::size_t min_count) {
  PathSet out{candidates.source, candidates.target, {}, candidates.supervised_only_middle};
  for (const auto& p : candidates.paths) {
    bool keep = true;
    for (const auto& z : p.pivots()) {
      auto it = pivot_counts.find(z);
      if (it == pivot_counts.end() || it->second < min_count) {
        keep = false;
        break;
      }
    }
    if (keep || p.hops() == 1) out.paths.push_back(p);
  }
  return out;
}

std::vector<ScoredPath> rank_ltr(const PathSet& candidates, const QualityMatrix& matrix, const LtrModel<double>& model,
                                 const PivotCounts& pivot_counts, std::size_t pivot_min_count) {
  const auto kept = filter_rare_pivots(candidates, pivot_counts, pivot_min_count);
  if (kept.paths.empty()) throw Error("route_ltr: no candidate paths");
  std::vector<ScoredPath> scored;
  scored.reserve(kept.paths.size());
  for (const auto& p : kept.paths) {
    const auto encoded = encode_path(p, matrix, candidates.supervised_only_middle);
    scored.push_back({p, 100.0 * forward(model, encoded)});
  }
  rank_with_ties(scored);
  return scored;
}

ScoredPath route_ltr(const PathSet& candidates, const QualityMatrix& matrix, const LtrModel<double>& model,
                     const PivotCounts& pivot_counts, std::size_t pivot_min_count) {
  return rank_ltr(candidates, matrix, model, pivot_counts, pivot_min_count).front();
}

ScoredPath route_ground_truth(const PathSet& candidates, const PathLabels& labels) {
  if (candidates.paths.empty()) throw Error("route_ground_truth: no candidate paths");
  std::vector<ScoredPath> scored;
  scored.reserve(candidates.paths.size());
  for (const auto& p : candidates.paths) {
    auto it = labels.find(p);
    if (it == labels.end()) throw Error("route_ground_truth: missing label for " + p.str());
    scored.push_back({p, it->second});
  }
  return scored[argmax_with_ties(scored)];
}

}  // namespace pivotroute
