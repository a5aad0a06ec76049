#include "pivotroute/evaluator.hpp"

#include <algorithm>

namespace pivotroute {

double topk_accuracy(const std::vector<RankedPair>& pairs, std::size_t k) {
  if (k < 1) throw Error("topk_accuracy: k must be at least 1");
  if (pairs.empty()) throw Error("topk_accuracy: no pairs");
  std::size_t hits = 0;
  for (const auto& pair : pairs) {
    if (pair.labels.empty()) throw Error("topk_accuracy: pair without labels");
    std::vector<ScoredPath> all;
    all.reserve(pair.labels.size());
    for (const auto& [path, bleu] : pair.labels) all.push_back({path, bleu});
    const auto& best = all[argmax_with_ties(all)].path;
    const auto n = std::min(k, pair.ranking.size());
    if (std::find(pair.ranking.begin(), pair.ranking.begin() + static_cast<std::ptrdiff_t>(n), best) !=
        pair.ranking.begin() + static_cast<std::ptrdiff_t>(n))
      ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(pairs.size());
}

double avg_selected_bleu(const std::vector<RoutingResult>& results) {
  if (results.empty()) throw Error("avg_selected_bleu: no results");
  double sum = 0.0;
  for (const auto& r : results) {
    if (!r.actual) throw Error("avg_selected_bleu: result without actual score for " + r.source + "->" + r.target);
    sum += *r.actual;
  }
  return sum / static_cast<double>(results.size());
}

std::array<double, 3> path_length_distribution(const std::vector<RoutingResult>& results) {
  if (results.empty()) throw Error("path_length_distribution: no results");
  std::array<double, 3> counts{0.0, 0.0, 0.0};
  for (const auto& r : results) counts[r.chosen.hops() - 1] += 1.0;
  for (auto& c : counts) c /= static_cast<double>(results.size());
  return counts;
}

CdfCurve cdf(const std::vector<RoutingResult>& results) {
  if (results.empty()) throw Error("cdf: no results");
  std::vector<double> scores;
  scores.reserve(results.size());
  for (const auto& r : results) {
    if (!r.actual) throw Error("cdf: result without actual score");
    scores.push_back(*r.actual);
  }
  std::sort(scores.begin(), scores.end());
  CdfCurve curve;
  const auto n = static_cast<double>(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) curve.push_back({scores[i], static_cast<double>(i + 1) / n});
  return curve;
}

std::string format_report(const std::vector<MethodReport>& reports) {
  std::string out;
  for (const auto& r : reports)
    out += r.method + '\t' + format_double(r.avg_bleu) + '\t' + format_double(r.top1) + '\t' + format_double(r.top5) +
           '\n';
  return out;
}

std::string format_cdf(const CdfCurve& curve) {
  std::string out;
  for (const auto& p : curve) out += format_double(p.bleu) + ',' + format_double(p.fraction) + '\n';
  return out;
}

std::string format_routing_rows(const std::vector<RoutingResult>& rows) {
  std::string out;
  for (const auto& r : rows)
    out += r.source + '\t' + r.target + '\t' + r.method + '\t' + r.chosen.str() + '\t' +
           (r.predicted ? format_double(*r.predicted) : "-") + '\t' + (r.actual ? format_double(*r.actual) : "-") +
           '\n';
  return out;
}

}  // namespace pivotroute
