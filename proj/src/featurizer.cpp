#include "pivotroute/featurizer.hpp"

namespace pivotroute {

std::vector<Token> tokenize_path(const Path& path) {
  const auto& langs = path.langs();
  std::vector<Token> tokens;
  tokens.reserve(2 * path.hops() + 1);
  for (std::size_t i = 0; i < langs.size(); ++i) {
    tokens.push_back({Token::Kind::Lang, langs[i], langs[i], tokens.size()});
    if (i + 1 < langs.size()) tokens.push_back({Token::Kind::Hop, langs[i], langs[i + 1], tokens.size()});
  }
  return tokens;
}

double normalize_bleu(double bleu) {
  if (!(bleu >= 0.0 && bleu <= 100.0)) throw Error("normalize_bleu: score out of [0,100]: " + format_double(bleu));
  return bleu / 100.0;
}

double token_bleu_feature(const Token& token, const QualityMatrix& matrix, const Path& path,
                          bool supervised_only_middle) {
  const auto& reg = matrix.registry();
  if (token.kind == Token::Kind::Hop) {
    // hop tokens sit at odd positions; hop index = position / 2
    const auto hop = token.position / 2;
    if (token.position % 2 != 1 || hop >= path.hops() || path.langs()[hop] != token.src ||
        path.langs()[hop + 1] != token.tgt)
      throw Error("token_bleu_feature: hop token does not belong to path " + path.str());
    return normalize_bleu(hop_score(matrix, path, hop, supervised_only_middle));
  }
  const auto lang = reg.index_of(token.src);
  if (token.position == 0) return normalize_bleu(lang_avg_bleu(matrix, lang, Direction::Outgoing));
  if (token.position == 2 * path.hops()) return normalize_bleu(lang_avg_bleu(matrix, lang, Direction::Incoming));
  return 0.5 * (normalize_bleu(lang_avg_bleu(matrix, lang, Direction::Incoming)) +
                normalize_bleu(lang_avg_bleu(matrix, lang, Direction::Outgoing)));
}

EncodedPath encode_path(const Path& path, const QualityMatrix& matrix, bool supervised_only_middle) {
  const auto& reg = matrix.registry();
  const auto tokens = tokenize_path(path);
  EncodedPath out;
  out.tokens.reserve(tokens.size());
  out.bleu.resize(static_cast<Eigen::Index>(tokens.size()));
  for (const auto& tok : tokens) {
    out.tokens.emplace_back(reg.index_of(tok.src), reg.index_of(tok.tgt));
    out.bleu[static_cast<Eigen::Index>(tok.position)] = token_bleu_feature(tok, matrix, path, supervised_only_middle);
  }
  return out;
}

}  // namespace pivotroute
