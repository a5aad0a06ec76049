#ifndef PIVOTROUTE_LANGDB_HPP
#define PIVOTROUTE_LANGDB_HPP

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

namespace pivotroute {

/// Raised for malformed inputs, unknown language codes and violated preconditions.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Language {
  std::string code;
  std::string name;
  std::string branch;
  std::uint64_t mono_size = 0;

  bool operator==(const Language&) const = default;
};

/// Ordered set of languages. The position of a language in the registry is
/// its index everywhere else (matrix rows, embedding columns).
class LanguageRegistry {
public:
  LanguageRegistry() = default;
  explicit LanguageRegistry(std::vector<Language> languages);

  std::size_t size() const { return languages_.size(); }
  const std::vector<Language>& languages() const { return languages_; }
  const Language& at(std::size_t index) const { return languages_.at(index); }
  const Language& at(const std::string& code) const { return languages_[index_of(code)]; }

  /// Throws Error for an unknown code.
  std::size_t index_of(const std::string& code) const;
  bool contains(const std::string& code) const { return index_.count(code) != 0; }

  const std::set<std::string>& branch_set() const { return branches_; }
  std::vector<std::string> codes() const;

private:
  std::vector<Language> languages_;
  std::unordered_map<std::string, std::size_t> index_;
  std::set<std::string> branches_;
};

LanguageRegistry load_registry(const std::filesystem::path& path);
LanguageRegistry parse_registry(const std::string& text);
std::string format_registry(const LanguageRegistry& registry);

/// True iff x and y belong to different branches.
bool is_distant(const LanguageRegistry& registry, const std::string& x, const std::string& y);

/// Directed one-hop BLEU scores between every ordered pair of registry
/// languages. Edges may additionally carry a supervised score, which only
/// applies where the hop policy allows it (see pathspace.hpp).
class QualityMatrix {
public:
  QualityMatrix() = default;
  explicit QualityMatrix(LanguageRegistry registry);
  explicit QualityMatrix(std::shared_ptr<const LanguageRegistry> registry);

  const LanguageRegistry& registry() const { return *registry_; }
  const std::shared_ptr<const LanguageRegistry>& registry_ptr() const { return registry_; }
  std::size_t size() const { return static_cast<std::size_t>(score_.rows()); }

  /// Unsupervised score by index; the diagonal is NaN.
  double score(std::size_t src, std::size_t tgt) const { return score_(src, tgt); }
  double score(const std::string& src, const std::string& tgt) const;
  void set_score(std::size_t src, std::size_t tgt, double bleu);

  bool supervised(std::size_t src, std::size_t tgt) const { return supervised_(src, tgt); }
  double supervised_score(std::size_t src, std::size_t tgt) const { return supervised_score_(src, tgt); }
  void set_supervised(std::size_t src, std::size_t tgt, double bleu);
  bool has_supervised_edges() const { return supervised_.any(); }

  const Eigen::MatrixXd& scores() const { return score_; }

  bool operator==(const QualityMatrix& other) const;

private:
  std::shared_ptr<const LanguageRegistry> registry_;
  Eigen::MatrixXd score_;
  Eigen::MatrixXd supervised_score_;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> supervised_;
};

QualityMatrix load_quality_matrix(const std::filesystem::path& path, const LanguageRegistry& registry);
QualityMatrix parse_quality_matrix(const std::string& text, const LanguageRegistry& registry);
/// One row per ordered pair in registry order. Scores printed with
/// round-trip precision.
std::string format_quality_matrix(const QualityMatrix& matrix);

enum class Direction { Outgoing, Incoming };

/// Mean unsupervised score of every hop leaving (or entering) lang.
double lang_avg_bleu(const QualityMatrix& matrix, const std::string& lang, Direction direction);
double lang_avg_bleu(const QualityMatrix& matrix, std::size_t lang, Direction direction);

// helpers shared by the TSV readers/writers
std::vector<std::string> split(const std::string& line, char sep);
std::string format_double(double value);
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace pivotroute

#endif
