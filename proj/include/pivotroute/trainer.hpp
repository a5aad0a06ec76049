#ifndef PIVOTROUTE_TRAINER_HPP
#define PIVOTROUTE_TRAINER_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "pivotroute/lstm.hpp"

namespace pivotroute {

struct TrainConfig {
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t epochs = 200;
  std::size_t batch_size = 8;
  std::uint64_t seed = 0;
  Eigen::Index hidden_dim = 6;
  std::size_t num_layers = 2;

  void validate() const;
};

struct LabeledSample {
  EncodedPath path;
  double label = 0.0;  // normalized BLEU
};

/// One development pair: candidates in tie order (fewer hops, then path
/// text) and the index of the true best path among them, or npos when the
/// rare-pivot filter removed it.
struct DevPair {
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  std::vector<EncodedPath> candidates;
  std::size_t best = npos;
};

struct TrainReport {
  double initial_mse = 0.0;
  std::vector<double> train_mse;  // mean sample loss seen during each epoch
  std::vector<double> dev_top1;
  std::size_t selected_epoch = 0;  // 0-based
  double final_mse = 0.0;          // full pass with the selected parameters

  bool operator==(const TrainReport&) const = default;
};

double dataset_mse(const LtrModel<double>& model, const std::vector<LabeledSample>& samples);

/// Fraction of dev pairs whose highest-predicted candidate is the true best.
double dev_top1(const LtrModel<double>& model, const std::vector<DevPair>& dev);

/// Mini-batch Adam on MSE. Keeps the parameters of the epoch with the best
/// dev top-1 (earliest on ties; the last epoch when dev is empty).
std::pair<LtrModel<double>, TrainReport> train(LtrModel<double> model, const std::vector<LabeledSample>& samples,
                                               const std::vector<DevPair>& dev, const TrainConfig& config);

/// `epoch<TAB>train_mse<TAB>dev_top1` rows plus summary comment lines.
std::string format_train_report(const TrainReport& report);

}  // namespace pivotroute

#endif
