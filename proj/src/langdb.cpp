#include "pivotroute/langdb.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace pivotroute {

namespace {

double parse_double(const std::string& field, const std::string& what) {
  try {
    std::size_t used = 0;
    double value = std::stod(field, &used);
    if (used != field.size()) throw Error("trailing characters");
    return value;
  } catch (const std::exception&) {
    throw Error("invalid " + what + ": '" + field + "'");
  }
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(sep, start);
    fields.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return fields;
}

std::string format_double(double value) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << contents;
  if (!out) throw Error("write failed: " + path.string());
}

LanguageRegistry::LanguageRegistry(std::vector<Language> languages) : languages_(std::move(languages)) {
  if (languages_.empty()) throw Error("no languages");
  for (std::size_t i = 0; i < languages_.size(); ++i) {
    const auto& lang = languages_[i];
    if (lang.code.empty()) throw Error("empty language code");
    if (!index_.emplace(lang.code, i).second) throw Error("duplicate language code: " + lang.code);
    branches_.insert(lang.branch);
  }
  if (languages_.size() < 2) throw Error("registry needs at least 2 languages");
}

std::size_t LanguageRegistry::index_of(const std::string& code) const {
  auto it = index_.find(code);
  if (it == index_.end()) throw Error("unknown language code: " + code);
  return it->second;
}

std::vector<std::string> LanguageRegistry::codes() const {
  std::vector<std::string> out;
  out.reserve(languages_.size());
  for (const auto& l : languages_) out.push_back(l.code);
  return out;
}

LanguageRegistry parse_registry(const std::string& text) {
  std::vector<Language> langs;
  for (const auto& line : lines_of(text)) {
    auto f = split(line, '\t');
    if (f.size() != 4) throw Error("languages.tsv: expected 4 columns, got " + std::to_string(f.size()));
    std::uint64_t size = 0;
    auto [ptr, ec] = std::from_chars(f[3].data(), f[3].data() + f[3].size(), size);
    if (ec != std::errc() || ptr != f[3].data() + f[3].size())
      throw Error("languages.tsv: non-integer mono_size '" + f[3] + "'");
    langs.push_back({f[0], f[1], f[2], size});
  }
  return LanguageRegistry(std::move(langs));
}

LanguageRegistry load_registry(const std::filesystem::path& path) { return parse_registry(read_file(path)); }

std::string format_registry(const LanguageRegistry& registry) {
  std::string out;
  for (const auto& l : registry.languages())
    out += l.code + '\t' + l.name + '\t' + l.branch + '\t' + std::to_string(l.mono_size) + '\n';
  return out;
}

bool is_distant(const LanguageRegistry& registry, const std::string& x, const std::string& y) {
  if (x == y) throw Error("is_distant: self pair " + x);
  return registry.at(x).branch != registry.at(y).branch;
}

QualityMatrix::QualityMatrix(LanguageRegistry registry)
    : QualityMatrix(std::make_shared<const LanguageRegistry>(std::move(registry))) {}

QualityMatrix::QualityMatrix(std::shared_ptr<const LanguageRegistry> registry) : registry_(std::move(registry)) {
  const auto n = static_cast<Eigen::Index>(registry_->size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  score_ = Eigen::MatrixXd::Constant(n, n, nan);
  supervised_score_ = Eigen::MatrixXd::Constant(n, n, nan);
  supervised_ = decltype(supervised_)::Constant(n, n, false);
}

double QualityMatrix::score(const std::string& src, const std::string& tgt) const {
  return score(registry_->index_of(src), registry_->index_of(tgt));
}

void QualityMatrix::set_score(std::size_t src, std::size_t tgt, double bleu) {
  if (src == tgt) throw Error("quality matrix: diagonal entries are undefined");
  if (!(bleu >= 0.0 && bleu <= 100.0)) throw Error("quality matrix: score out of [0,100]: " + format_double(bleu));
  score_(src, tgt) = bleu;
}

void QualityMatrix::set_supervised(std::size_t src, std::size_t tgt, double bleu) {
  if (src == tgt) throw Error("quality matrix: diagonal entries are undefined");
  if (!(bleu >= 0.0 && bleu <= 100.0)) throw Error("quality matrix: score out of [0,100]: " + format_double(bleu));
  supervised_(src, tgt) = true;
  supervised_score_(src, tgt) = bleu;
}

bool QualityMatrix::operator==(const QualityMatrix& other) const {
  if (size() != other.size()) return false;
  for (std::size_t s = 0; s < size(); ++s)
    for (std::size_t t = 0; t < size(); ++t) {
      if (s == t) continue;
      if (score_(s, t) != other.score_(s, t) || supervised_(s, t) != other.supervised_(s, t)) return false;
      if (supervised_(s, t) && supervised_score_(s, t) != other.supervised_score_(s, t)) return false;
    }
  return true;
}

// Rows: src tgt bleu [supervised [unsupervised_bleu]]. For a supervised edge
// the bleu column is the supervised score and the fifth column keeps the
// unsupervised score used outside the middle hop.
QualityMatrix parse_quality_matrix(const std::string& text, const LanguageRegistry& registry) {
  QualityMatrix m(registry);
  const std::size_t n = registry.size();
  std::vector<char> seen(n * n, 0);
  for (const auto& line : lines_of(text)) {
    auto f = split(line, '\t');
    if (f.size() < 3 || f.size() > 5) throw Error("matrix.tsv: expected 3 to 5 columns, got " + std::to_string(f.size()));
    const auto s = registry.index_of(f[0]);
    const auto t = registry.index_of(f[1]);
    if (s == t) throw Error("matrix.tsv: self pair " + f[0]);
    if (seen[s * n + t]) throw Error("matrix.tsv: duplicate pair " + f[0] + "->" + f[1]);
    seen[s * n + t] = 1;
    const double bleu = parse_double(f[2], "bleu");
    const bool sup = f.size() >= 4 && f[3] == "1";
    if (f.size() >= 4 && f[3] != "0" && f[3] != "1") throw Error("matrix.tsv: supervised flag must be 0 or 1");
    if (sup) {
      if (f.size() != 5) throw Error("matrix.tsv: supervised row " + f[0] + "->" + f[1] + " lacks the unsupervised score");
      m.set_score(s, t, parse_double(f[4], "bleu"));
      m.set_supervised(s, t, bleu);
    } else {
      m.set_score(s, t, bleu);
    }
  }
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t)
      if (s != t && !seen[s * n + t])
        throw Error("matrix.tsv: missing pair " + registry.at(s).code + "->" + registry.at(t).code);
  return m;
}

QualityMatrix load_quality_matrix(const std::filesystem::path& path, const LanguageRegistry& registry) {
  return parse_quality_matrix(read_file(path), registry);
}

std::string format_quality_matrix(const QualityMatrix& matrix) {
  const auto& reg = matrix.registry();
  const bool with_flag = matrix.has_supervised_edges();
  std::string out;
  for (std::size_t s = 0; s < reg.size(); ++s)
    for (std::size_t t = 0; t < reg.size(); ++t) {
      if (s == t) continue;
      out += reg.at(s).code + '\t' + reg.at(t).code + '\t';
      if (matrix.supervised(s, t)) {
        out += format_double(matrix.supervised_score(s, t)) + "\t1\t" + format_double(matrix.score(s, t));
      } else {
        out += format_double(matrix.score(s, t));
        if (with_flag) out += "\t0";
      }
      out += '\n';
    }
  return out;
}

double lang_avg_bleu(const QualityMatrix& matrix, std::size_t lang, Direction direction) {
  const auto n = matrix.size();
  double sum = 0.0;
  for (std::size_t other = 0; other < n; ++other) {
    if (other == lang) continue;
    sum += direction == Direction::Outgoing ? matrix.score(lang, other) : matrix.score(other, lang);
  }
  return sum / static_cast<double>(n - 1);
}

double lang_avg_bleu(const QualityMatrix& matrix, const std::string& lang, Direction direction) {
  return lang_avg_bleu(matrix, matrix.registry().index_of(lang), direction);
}

}  // namespace pivotroute
