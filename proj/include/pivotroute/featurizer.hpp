#ifndef PIVOTROUTE_FEATURIZER_HPP
#define PIVOTROUTE_FEATURIZER_HPP

#include <string>
#include <vector>

#include <Eigen/Core>

#include "pivotroute/langdb.hpp"
#include "pivotroute/pathspace.hpp"

namespace pivotroute {

inline constexpr Eigen::Index kEmbeddingDim = 5;
inline constexpr Eigen::Index kFeatureDim = kEmbeddingDim + 1;

/// A path read as alternating language and hop tokens:
/// X, X->Z1, Z1, Z1->Z2, Z2, Z2->Y, Y.
struct Token {
  enum class Kind { Lang, Hop };
  Kind kind = Kind::Lang;
  std::string src;  // the language itself for Lang tokens
  std::string tgt;  // equal to src for Lang tokens
  std::size_t position = 0;

  bool operator==(const Token&) const = default;
};

std::vector<Token> tokenize_path(const Path& path);

/// BLEU points in [0,100] to [0,1].
double normalize_bleu(double bleu);

/// BLEU feature of one token of `path`: hops carry their own (normalized)
/// score; the first language its outgoing average, the last its incoming
/// average and interior languages the mean of both.
double token_bleu_feature(const Token& token, const QualityMatrix& matrix, const Path& path,
                          bool supervised_only_middle = true);

/// Index-level form of a path consumed by the model: per token, the pair of
/// embedding columns to average (equal for Lang tokens) and the BLEU feature.
struct EncodedPath {
  std::vector<std::pair<std::size_t, std::size_t>> tokens;
  Eigen::VectorXd bleu;

  std::size_t length() const { return tokens.size(); }
};

EncodedPath encode_path(const Path& path, const QualityMatrix& matrix, bool supervised_only_middle = true);

/// Embedding table: one kEmbeddingDim column per registry language.
template <typename Scalar>
using EmbeddingTable = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Per-token features as columns of a kFeatureDim x tokens matrix.
template <typename Scalar>
using FeatureSequence = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> token_embedding(const std::pair<std::size_t, std::size_t>& token,
                                                         const EmbeddingTable<Scalar>& table) {
  const auto a = static_cast<Eigen::Index>(token.first);
  const auto b = static_cast<Eigen::Index>(token.second);
  if (a >= table.cols() || b >= table.cols()) throw Error("token_embedding: language outside embedding table");
  if (a == b) return table.col(a);
  return Scalar(0.5) * (table.col(a) + table.col(b));
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> token_embedding(const Token& token, const LanguageRegistry& registry,
                                                         const EmbeddingTable<Scalar>& table) {
  return token_embedding<Scalar>({registry.index_of(token.src), registry.index_of(token.tgt)}, table);
}

template <typename Scalar>
FeatureSequence<Scalar> featurize(const EncodedPath& encoded, const EmbeddingTable<Scalar>& table) {
  const auto emb_dim = table.rows();
  FeatureSequence<Scalar> features(emb_dim + 1, static_cast<Eigen::Index>(encoded.length()));
  for (std::size_t t = 0; t < encoded.length(); ++t) {
    const auto col = static_cast<Eigen::Index>(t);
    features.col(col).head(emb_dim) = token_embedding<Scalar>(encoded.tokens[t], table);
    features(emb_dim, col) = static_cast<Scalar>(encoded.bleu[col]);
  }
  return features;
}

template <typename Scalar>
FeatureSequence<Scalar> featurize(const Path& path, const QualityMatrix& matrix, const EmbeddingTable<Scalar>& table) {
  return featurize<Scalar>(encode_path(path, matrix), table);
}

}  // namespace pivotroute

#endif
