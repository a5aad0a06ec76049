#include "pivotroute/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace pivotroute {

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0)) throw Error("train: learning_rate must be nonnegative");
  if (epochs < 1) throw Error("train: epochs must be at least 1");
  if (batch_size < 1) throw Error("train: batch_size must be at least 1");
  if (hidden_dim < 1 || num_layers < 1) throw Error("train: invalid model dimensions");
}

double dataset_mse(const LtrModel<double>& model, const std::vector<LabeledSample>& samples) {
  if (samples.empty()) throw Error("dataset_mse: no samples");
  double sum = 0.0;
  for (const auto& s : samples) sum += loss_mse(forward(model, s.path), s.label);
  return sum / static_cast<double>(samples.size());
}

double dev_top1(const LtrModel<double>& model, const std::vector<DevPair>& dev) {
  if (dev.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& pair : dev) {
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pair.candidates.size(); ++i) {
      const double s = forward(model, pair.candidates[i]);
      if (s > best_score) {  // strict: earlier candidates win ties
        best_score = s;
        best = i;
      }
    }
    if (best == pair.best) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(dev.size());
}

std::pair<LtrModel<double>, TrainReport> train(LtrModel<double> model, const std::vector<LabeledSample>& samples,
                                               const std::vector<DevPair>& dev, const TrainConfig& config) {
  config.validate();
  if (samples.empty()) throw Error("train: no training samples");

  TrainReport report;
  report.initial_mse = dataset_mse(model, samples);

  AdamOptimizer<double> adam(model, {config.learning_rate, config.beta1, config.beta2, config.epsilon});
  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);

  LtrModel<double> best_model = model;
  double best_top1 = -1.0;
  auto grad = model.zeros_like();

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const auto end = std::min(order.size(), start + config.batch_size);
      const double weight = 1.0 / static_cast<double>(end - start);
      grad.visit([](const std::string&, LtrModel<double>::Matrix& m) { m.setZero(); });
      for (std::size_t k = start; k < end; ++k) {
        const auto& s = samples[order[k]];
        epoch_loss += accumulate_gradient(model, s.path, s.label, grad, weight);
      }
      if (!std::isfinite(epoch_loss)) throw Error("train: loss diverged (non-finite) in epoch " + std::to_string(epoch));
      adam.step(model, grad);
    }
    if (!model.all_finite()) throw Error("train: parameters diverged in epoch " + std::to_string(epoch));
    report.train_mse.push_back(epoch_loss / static_cast<double>(samples.size()));

    const double top1 = dev_top1(model, dev);
    report.dev_top1.push_back(top1);
    if (dev.empty() ? true : top1 > best_top1) {
      best_top1 = top1;
      best_model = model;
      report.selected_epoch = epoch;
    }
  }
  report.final_mse = dataset_mse(best_model, samples);
  return {std::move(best_model), std::move(report)};
}

std::string format_train_report(const TrainReport& report) {
  std::string out;
  out += "# initial_mse\t" + format_double(report.initial_mse) + '\n';
  out += "# selected_epoch\t" + std::to_string(report.selected_epoch) + '\n';
  out += "# final_mse\t" + format_double(report.final_mse) + '\n';
  for (std::size_t e = 0; e < report.train_mse.size(); ++e)
    out += std::to_string(e) + '\t' + format_double(report.train_mse[e]) + '\t' + format_double(report.dev_top1[e]) +
           '\n';
  return out;
}

}  // namespace pivotroute
