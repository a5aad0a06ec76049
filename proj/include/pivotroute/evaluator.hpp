#ifndef PIVOTROUTE_EVALUATOR_HPP
#define PIVOTROUTE_EVALUATOR_HPP

#include <array>
#include <string>
#include <vector>

#include "pivotroute/routers.hpp"

namespace pivotroute {

struct MethodReport {
  std::string method;
  double avg_bleu = 0.0;
  double top1 = 0.0;
  double top5 = 0.0;
  std::vector<RoutingResult> rows;
};

struct CdfPoint {
  double bleu;
  double fraction;
};
using CdfCurve = std::vector<CdfPoint>;

/// One routing decision to score: the router's candidates best first and the
/// complete labels of the pair.
struct RankedPair {
  std::vector<Path> ranking;
  PathLabels labels;
};

/// Fraction of pairs whose true best path (ground-truth tie order) is among
/// the first k entries of the ranking.
double topk_accuracy(const std::vector<RankedPair>& pairs, std::size_t k);

double avg_selected_bleu(const std::vector<RoutingResult>& results);

/// Fractions of results whose chosen path has 1, 2 and 3 hops.
std::array<double, 3> path_length_distribution(const std::vector<RoutingResult>& results);

/// (b_i, i/n) over the actual scores sorted ascending.
CdfCurve cdf(const std::vector<RoutingResult>& results);

/// `method<TAB>avg_bleu<TAB>top1<TAB>top5` per report.
std::string format_report(const std::vector<MethodReport>& reports);
/// `bleu,fraction` per point.
std::string format_cdf(const CdfCurve& curve);
/// `src<TAB>tgt<TAB>method<TAB>path<TAB>predicted<TAB>actual`; absent values print "-".
std::string format_routing_rows(const std::vector<RoutingResult>& rows);

}  // namespace pivotroute

#endif
