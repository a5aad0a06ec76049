#include "pivotroute/pathspace.hpp"

namespace pivotroute {

Path::Path(std::vector<std::string> langs) : langs_(std::move(langs)) {
  if (langs_.size() < 2 || langs_.size() > kMaxHops + 1)
    throw Error("path must have 1 to 3 hops, got " + std::to_string(langs_.size()) + " languages");
  for (std::size_t i = 1; i < langs_.size(); ++i)
    if (langs_[i] == langs_[i - 1]) throw Error("path repeats consecutive language " + langs_[i]);
}

Path Path::parse(const std::string& text) {
  std::vector<std::string> langs;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find("->", start);
    langs.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 2;
  }
  for (const auto& l : langs)
    if (l.empty()) throw Error("malformed path '" + text + "'");
  return Path(std::move(langs));
}

std::string Path::str() const {
  std::string out = langs_.front();
  for (std::size_t i = 1; i < langs_.size(); ++i) out += "->" + langs_[i];
  return out;
}

bool tie_precedes(const Path& a, const Path& b) {
  if (a.hops() != b.hops()) return a.hops() < b.hops();
  return a.str() < b.str();
}

PathSet enumerate_paths(const std::string& x, const std::string& y, const std::set<std::string>& pivot_pool,
                        int max_pivots, bool supervised_only_middle) {
  if (x == y) throw Error("enumerate_paths: source equals target (" + x + ")");
  if (pivot_pool.count(x) || pivot_pool.count(y)) throw Error("enumerate_paths: pivot pool contains an endpoint");
  if (max_pivots < 0 || max_pivots > 2) throw Error("enumerate_paths: max_pivots must be in [0,2]");

  PathSet set{x, y, {}, supervised_only_middle};
  set.paths.emplace_back(std::vector<std::string>{x, y});
  if (max_pivots >= 1)
    for (const auto& z : pivot_pool) set.paths.emplace_back(std::vector<std::string>{x, z, y});
  if (max_pivots >= 2)
    for (const auto& z1 : pivot_pool)
      for (const auto& z2 : pivot_pool)
        if (z1 != z2) set.paths.emplace_back(std::vector<std::string>{x, z1, z2, y});
  return set;
}

std::uint64_t count_paths(std::uint64_t pool_size, int max_hops) {
  switch (max_hops) {
    case 1: return 1;
    case 2: return 1 + pool_size;
    case 3: return 1 + pool_size + (pool_size == 0 ? 0 : pool_size * (pool_size - 1));
    default: throw Error("count_paths: max_hops must be 1, 2 or 3");
  }
}

double estimate_eval_cost(std::uint64_t num_languages, double minutes_per_path) {
  if (num_languages < 2) throw Error("estimate_eval_cost: need at least 2 languages");
  const double m = static_cast<double>(num_languages);
  const double ordered = m * (m - 1.0);
  return ordered * ordered * minutes_per_path / 1440.0;
}

double hop_score(const QualityMatrix& matrix, const Path& path, std::size_t hop, bool supervised_only_middle) {
  const auto& reg = matrix.registry();
  const auto s = reg.index_of(path.langs().at(hop));
  const auto t = reg.index_of(path.langs().at(hop + 1));
  if (matrix.supervised(s, t)) {
    const bool middle = path.hops() == 3 && hop == 1;
    if (middle || !supervised_only_middle) return matrix.supervised_score(s, t);
  }
  return matrix.score(s, t);
}

std::vector<double> hop_scores(const QualityMatrix& matrix, const Path& path, bool supervised_only_middle) {
  std::vector<double> out;
  out.reserve(path.hops());
  for (std::size_t h = 0; h < path.hops(); ++h) out.push_back(hop_score(matrix, path, h, supervised_only_middle));
  return out;
}

}  // namespace pivotroute
