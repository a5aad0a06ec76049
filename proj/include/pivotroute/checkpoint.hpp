#ifndef PIVOTROUTE_CHECKPOINT_HPP
#define PIVOTROUTE_CHECKPOINT_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "pivotroute/lstm.hpp"

namespace pivotroute {

struct Checkpoint {
  LtrModel<double> model;
  /// Registry codes in embedding-column order.
  std::vector<std::string> languages;
};

/// Flat JSON: {"format", "languages", "hidden_dim", "num_layers",
/// "tensors": {name: {"shape": [rows, cols], "data": [column-major values]}}}.
std::string format_checkpoint(const Checkpoint& checkpoint);
Checkpoint parse_checkpoint(const std::string& text);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace pivotroute

#endif
