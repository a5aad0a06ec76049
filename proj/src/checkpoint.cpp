#include "pivotroute/checkpoint.hpp"

#include <json.hpp>

namespace pivotroute {

namespace {
constexpr const char* kFormat = "pivotroute-ltr-checkpoint-v1";
}

std::string format_checkpoint(const Checkpoint& checkpoint) {
  using nlohmann::ordered_json;
  const auto& model = checkpoint.model;
  ordered_json doc;
  doc["format"] = kFormat;
  doc["languages"] = checkpoint.languages;
  doc["hidden_dim"] = model.hidden_dim();
  doc["num_layers"] = model.num_layers();
  ordered_json tensors = ordered_json::object();
  model.visit([&](const std::string& name, const LtrModel<double>::Matrix& m) {
    ordered_json t;
    t["shape"] = {m.rows(), m.cols()};
    t["data"] = std::vector<double>(m.data(), m.data() + m.size());
    tensors[name] = std::move(t);
  });
  doc["tensors"] = std::move(tensors);
  return doc.dump(1) + "\n";
}

Checkpoint parse_checkpoint(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("checkpoint: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != kFormat) throw Error("checkpoint: unsupported format");
    Checkpoint cp;
    cp.languages = doc.at("languages").get<std::vector<std::string>>();
    const auto hidden = doc.at("hidden_dim").get<Eigen::Index>();
    const auto layers = doc.at("num_layers").get<std::size_t>();
    cp.model = LtrModel<double>(cp.languages.size(), hidden, layers);
    const auto& tensors = doc.at("tensors");
    cp.model.visit([&](const std::string& name, LtrModel<double>::Matrix& m) {
      const auto& t = tensors.at(name);
      const auto shape = t.at("shape").get<std::vector<Eigen::Index>>();
      if (shape.size() != 2 || shape[0] != m.rows() || shape[1] != m.cols())
        throw Error("checkpoint: tensor " + name + " has unexpected shape");
      const auto data = t.at("data").get<std::vector<double>>();
      if (static_cast<Eigen::Index>(data.size()) != m.size()) throw Error("checkpoint: tensor " + name + " size mismatch");
      std::copy(data.begin(), data.end(), m.data());
    });
    if (!cp.model.all_finite()) throw Error("checkpoint: non-finite parameter");
    return cp;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  write_file(path, format_checkpoint(checkpoint));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) { return parse_checkpoint(read_file(path)); }

}  // namespace pivotroute
