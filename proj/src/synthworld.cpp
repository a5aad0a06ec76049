#include "pivotroute/synthworld.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace pivotroute {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string two_digit(std::size_t i) { return (i < 10 ? "0" : "") + std::to_string(i); }

}  // namespace

void WorldConfig::validate() const {
  if (num_languages < 2) throw Error("world: need at least 2 languages");
  if (num_branches < 2) throw Error("world: need at least 2 branches for distant pairs");
  if (num_branches > num_languages) throw Error("world: more branches than languages");
  auto in_range = [](double v) { return v >= 0.0 && v <= 100.0; };
  if (!in_range(base_min) || !in_range(base_max) || base_min > base_max)
    throw Error("world: base quality range must lie within [0,100]");
  if (!in_range(branch_affinity)) throw Error("world: branch_affinity must lie within [0,100]");
  if (!(resource_weight >= 0.0 && resource_weight <= 1.0)) throw Error("world: resource_weight must lie in [0,1]");
  if (!(size_spread >= 0.0 && size_spread <= 10.0)) throw Error("world: size_spread must lie in [0,10]");
  if (!(noise_sigma >= 0.0)) throw Error("world: noise_sigma must be nonnegative");
}

PathOracle::PathOracle(QualityMatrix matrix, std::uint64_t seed, double noise_sigma)
    : matrix_(std::move(matrix)), seed_(seed), noise_sigma_(noise_sigma) {}

double path_noise(std::uint64_t seed, const Path& path, double noise_sigma) {
  if (noise_sigma == 0.0) return 0.0;
  std::mt19937_64 rng(splitmix64(seed ^ fnv1a(path.str())));
  std::normal_distribution<double> normal(0.0, noise_sigma);
  return normal(rng);
}

double PathOracle::label(const Path& path) const {
  if (path.hops() == 1) return hop_score(matrix_, path, 0);
  double q = 1.0;
  for (double h : hop_scores(matrix_, path)) q *= h / 100.0;
  const double bleu = 100.0 * q * (1.0 + path_noise(seed_, path, noise_sigma_));
  return std::clamp(bleu, 0.0, 100.0);
}

PathLabels PathOracle::label_all(const PathSet& candidates) const {
  PathLabels labels;
  for (const auto& p : candidates.paths) labels.emplace(p, label(p));
  return labels;
}

World gen_world(const WorldConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const auto n = config.num_languages;
  std::vector<double> resource(n);
  std::vector<Language> langs;
  for (std::size_t i = 0; i < n; ++i) {
    resource[i] = unit(rng);
    const auto size = static_cast<std::uint64_t>(std::llround(std::pow(10.0, 5.0 + config.size_spread * resource[i])));
    langs.push_back({"l" + two_digit(i), "Lang" + two_digit(i), "B" + std::to_string(i % config.num_branches), size});
  }

  QualityMatrix matrix{LanguageRegistry(std::move(langs))};
  const auto& reg = matrix.registry();
  const double span = config.base_max - config.base_min;
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t) {
      if (s == t) continue;
      const double v = unit(rng);
      double q = config.base_min +
                 span * (config.resource_weight * resource[s] * resource[t] + (1.0 - config.resource_weight) * v);
      if (reg.at(s).branch == reg.at(t).branch) q += config.branch_affinity;
      matrix.set_score(s, t, std::clamp(q, 0.0, 100.0));
    }
  PathOracle oracle(matrix, config.seed, config.noise_sigma);
  return World{config, std::move(matrix), std::move(oracle)};
}

std::vector<LanguagePair> distant_pairs(const LanguageRegistry& registry) {
  std::vector<LanguagePair> pairs;
  for (const auto& x : registry.languages())
    for (const auto& y : registry.languages())
      if (x.code != y.code && x.branch != y.branch) pairs.push_back({x.code, y.code});
  return pairs;
}

PathSet candidate_paths(const LanguageRegistry& registry, const LanguagePair& pair) {
  std::set<std::string> pool;
  for (const auto& l : registry.languages())
    if (l.code != pair.source && l.code != pair.target) pool.insert(l.code);
  return enumerate_paths(pair.source, pair.target, pool);
}

std::size_t split_size(std::size_t total_ordered_pairs, double frac) {
  return 2 * static_cast<std::size_t>(std::llround(frac * static_cast<double>(total_ordered_pairs) / 2.0));
}

PivotCounts count_pivots(const PathLabels& labels, const std::set<LanguagePair>& pairs) {
  PivotCounts counts;
  for (const auto& [path, bleu] : labels) {
    if (!pairs.count({path.source(), path.target()})) continue;
    for (const auto& z : path.pivots()) ++counts[z];
  }
  return counts;
}

RoutingDataset build_dataset(const LanguageRegistry& registry, const PathOracle& oracle, const DatasetConfig& config) {
  for (double f : {config.dev_frac, config.test_frac, config.train_path_frac})
    if (!(f > 0.0 && f < 1.0)) throw Error("build_dataset: fractions must lie in (0,1)");
  if (registry.branch_set().size() < 2) throw Error("build_dataset: need at least 2 branches");

  // unordered distant pairs, kept as (lower index, higher index)
  std::vector<LanguagePair> unordered;
  for (std::size_t i = 0; i < registry.size(); ++i)
    for (std::size_t j = i + 1; j < registry.size(); ++j)
      if (registry.at(i).branch != registry.at(j).branch) unordered.push_back({registry.at(i).code, registry.at(j).code});

  const auto total = 2 * unordered.size();
  const auto dev_n = split_size(total, config.dev_frac) / 2;
  const auto test_n = split_size(total, config.test_frac) / 2;
  if (dev_n == 0 || test_n == 0 || dev_n + test_n >= unordered.size())
    throw Error("build_dataset: too few distant pairs (" + std::to_string(total) + ") to split");

  std::mt19937_64 rng(config.seed);
  std::shuffle(unordered.begin(), unordered.end(), rng);

  RoutingDataset ds;
  auto add_both = [](std::vector<LanguagePair>& split, const LanguagePair& p) {
    split.push_back(p);
    split.push_back({p.target, p.source});
  };
  for (std::size_t k = 0; k < unordered.size(); ++k) {
    auto& split = k < dev_n ? ds.dev_pairs : (k < dev_n + test_n ? ds.test_pairs : ds.train_pairs);
    add_both(split, unordered[k]);
  }
  auto by_registry = [&](const LanguagePair& a, const LanguagePair& b) {
    const auto ka = std::pair(registry.index_of(a.source), registry.index_of(a.target));
    const auto kb = std::pair(registry.index_of(b.source), registry.index_of(b.target));
    return ka < kb;
  };
  for (auto* split : {&ds.train_pairs, &ds.dev_pairs, &ds.test_pairs}) std::sort(split->begin(), split->end(), by_registry);

  for (const auto& pair : ds.train_pairs) {
    const auto candidates = candidate_paths(registry, pair);
    const auto n = candidates.paths.size();
    const auto k = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(config.train_path_frac * static_cast<double>(n))), 1, n);
    // paths[0] is the direct path and is always sampled
    std::vector<std::size_t> rest(n - 1);
    std::iota(rest.begin(), rest.end(), 1);
    std::shuffle(rest.begin(), rest.end(), rng);
    ds.labels.emplace(candidates.paths[0], oracle.label(candidates.paths[0]));
    for (std::size_t i = 0; i + 1 < k; ++i) {
      const auto& p = candidates.paths[rest[i]];
      ds.labels.emplace(p, oracle.label(p));
    }
  }
  for (const auto* split : {&ds.dev_pairs, &ds.test_pairs})
    for (const auto& pair : *split)
      for (const auto& p : candidate_paths(registry, pair).paths) ds.labels.emplace(p, oracle.label(p));

  ds.pivot_counts = count_pivots(ds.labels, {ds.train_pairs.begin(), ds.train_pairs.end()});
  return ds;
}

QualityMatrix apply_supervised_overlay(const QualityMatrix& matrix, const std::set<std::string>& pivot_set,
                                       const std::map<std::pair<std::string, std::string>, double>& boost) {
  QualityMatrix out = matrix;
  const auto& reg = matrix.registry();
  for (const auto& [edge, bleu] : boost) {
    const auto& [src, tgt] = edge;
    if (!pivot_set.count(src) || !pivot_set.count(tgt))
      throw Error("supervised overlay: edge " + src + "->" + tgt + " leaves the pivot set");
    const auto s = reg.index_of(src);
    const auto t = reg.index_of(tgt);
    if (bleu < matrix.score(s, t))
      throw Error("supervised overlay: boost for " + src + "->" + tgt + " is below the unsupervised score");
    out.set_supervised(s, t, bleu);
  }
  return out;
}

std::map<std::pair<std::string, std::string>, double> uniform_boost(const QualityMatrix& matrix,
                                                                    const std::set<std::string>& pivot_set,
                                                                    double delta) {
  std::map<std::pair<std::string, std::string>, double> boost;
  for (const auto& a : pivot_set)
    for (const auto& b : pivot_set)
      if (a != b) boost[{a, b}] = std::min(100.0, matrix.score(a, b) + delta);
  return boost;
}

std::string format_labels(const PathLabels& labels) {
  std::string out;
  for (const auto& [path, bleu] : labels) out += path.str() + '\t' + format_double(bleu) + '\n';
  return out;
}

PathLabels parse_labels(const std::string& text) {
  PathLabels labels;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line, '\t');
    if (f.size() != 2) throw Error("labels.tsv: expected 2 columns");
    double bleu = 0.0;
    try {
      std::size_t used = 0;
      bleu = std::stod(f[1], &used);
      if (used != f[1].size()) throw Error("trailing characters");
    } catch (const std::exception&) {
      throw Error("labels.tsv: invalid bleu '" + f[1] + "'");
    }
    if (!(bleu >= 0.0 && bleu <= 100.0)) throw Error("labels.tsv: bleu out of [0,100]");
    if (!labels.emplace(Path::parse(f[0]), bleu).second) throw Error("labels.tsv: duplicate path " + f[0]);
  }
  return labels;
}

}  // namespace pivotroute
