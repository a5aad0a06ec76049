#ifndef PIVOTROUTE_TESTS_FIXTURES_HPP
#define PIVOTROUTE_TESTS_FIXTURES_HPP

#include <algorithm>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "pivotroute/langdb.hpp"
#include "pivotroute/pathspace.hpp"

namespace fixtures {

using namespace pivotroute;

inline LanguageRegistry make_registry(const std::vector<std::tuple<std::string, std::string, std::uint64_t>>& rows) {
  std::vector<Language> langs;
  for (const auto& [code, branch, size] : rows) langs.push_back({code, "Lang-" + code, branch, size});
  return LanguageRegistry(std::move(langs));
}

// a, b in branch X; c, d in branch Y; e in Z
inline LanguageRegistry small_registry() {
  return make_registry({{"a", "X", 10}, {"b", "X", 20}, {"c", "Y", 30}, {"d", "Y", 5}, {"e", "Z", 7}});
}

inline LanguageRegistry reconstructed_registry() {
  return load_registry(std::string(PIVOTROUTE_SOURCE_DIR) + "/data/languages_reconstructed.tsv");
}

inline QualityMatrix random_matrix(const LanguageRegistry& reg, std::uint64_t seed) {
  QualityMatrix m(reg);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (std::size_t s = 0; s < reg.size(); ++s)
    for (std::size_t t = 0; t < reg.size(); ++t)
      if (s != t) m.set_score(s, t, u(rng));
  return m;
}

// Uniform 1..3-hop path over distinct registry languages.
inline Path random_path(const LanguageRegistry& reg, std::mt19937_64& rng) {
  std::vector<std::string> codes = reg.codes();
  std::shuffle(codes.begin(), codes.end(), rng);
  std::uniform_int_distribution<std::size_t> hops(1, std::min<std::size_t>(3, reg.size() - 1));
  codes.resize(hops(rng) + 1);
  return Path(codes);
}

}  // namespace fixtures

#endif
