#include <doctest.h>

#include "fixtures.hpp"
#include "pivotroute/featurizer.hpp"
#include "pivotroute/synthworld.hpp"

using namespace pivotroute;

TEST_CASE("tokenize_path alternates languages and hops") {
  const auto one = tokenize_path(Path::parse("da->gl"));
  REQUIRE(one.size() == 3);
  CHECK(one[0] == Token{Token::Kind::Lang, "da", "da", 0});
  CHECK(one[1] == Token{Token::Kind::Hop, "da", "gl", 1});
  CHECK(one[2] == Token{Token::Kind::Lang, "gl", "gl", 2});

  CHECK(tokenize_path(Path::parse("x->z->y")).size() == 5);

  const auto three = tokenize_path(Path::parse("x->z1->z2->y"));
  REQUIRE(three.size() == 7);
  const std::vector<std::pair<std::string, std::string>> expect{
      {"x", "x"}, {"x", "z1"}, {"z1", "z1"}, {"z1", "z2"}, {"z2", "z2"}, {"z2", "y"}, {"y", "y"}};
  for (std::size_t i = 0; i < 7; ++i) {
    CHECK(three[i].src == expect[i].first);
    CHECK(three[i].tgt == expect[i].second);
    CHECK(three[i].kind == (i % 2 ? Token::Kind::Hop : Token::Kind::Lang));
  }
}

TEST_CASE("normalize_bleu") {
  CHECK(normalize_bleu(0) == 0.0);
  CHECK(normalize_bleu(100) == 1.0);
  CHECK(normalize_bleu(6.56) == doctest::Approx(0.0656));
  CHECK_THROWS_AS(normalize_bleu(-1), Error);
  CHECK_THROWS_AS(normalize_bleu(100.01), Error);
}

TEST_CASE("token_embedding") {
  EmbeddingTable<double> table(5, 3);
  table.col(0).setConstant(1.0);
  table.col(1).setConstant(3.0);
  table.col(2).setConstant(1.0);
  CHECK(token_embedding<double>({0, 1}, table) == Eigen::VectorXd::Constant(5, 2.0));
  CHECK(token_embedding<double>({1, 1}, table) == table.col(1));
  CHECK(token_embedding<double>({0, 2}, table) == table.col(0));
  CHECK_THROWS_AS(token_embedding<double>({0, 3}, table), Error);

  const auto reg = fixtures::make_registry({{"a", "X", 1}, {"b", "Y", 1}, {"c", "Z", 1}});
  CHECK(token_embedding<double>(Token{Token::Kind::Hop, "a", "b", 1}, reg, table) ==
        Eigen::VectorXd::Constant(5, 2.0));
}

TEST_CASE("token BLEU features") {
  const auto reg = fixtures::make_registry({{"da", "Germanic", 1}, {"gl", "Italic", 1}, {"en", "Germanic", 1}});
  QualityMatrix m(reg);
  for (std::size_t s = 0; s < 3; ++s)
    for (std::size_t t = 0; t < 3; ++t)
      if (s != t) m.set_score(s, t, 10.0);
  m.set_score(reg.index_of("da"), reg.index_of("gl"), 6.56);

  const auto p = Path::parse("da->gl");
  const auto toks = tokenize_path(p);
  CHECK(token_bleu_feature(toks[1], m, p) == doctest::Approx(0.0656));

  const auto q = Path::parse("en->da");
  CHECK(token_bleu_feature(tokenize_path(q)[0], m, q) == doctest::Approx(0.10));

  // a hop token that does not belong to the path
  CHECK_THROWS_AS(token_bleu_feature(Token{Token::Kind::Hop, "en", "gl", 1}, m, p), Error);
}

TEST_CASE("interior language feature matches an independent recomputation") {
  const auto world = gen_world({});
  const auto& reg = world.registry();
  const auto& s = world.matrix.scores();
  const auto path = Path::parse("l00->l05->l10->l15");
  const auto toks = tokenize_path(path);
  for (std::size_t pos : {2u, 4u}) {
    const auto z = static_cast<Eigen::Index>(reg.index_of(toks[pos].src));
    double in = 0.0, out = 0.0;
    for (Eigen::Index k = 0; k < s.rows(); ++k) {
      if (k == z) continue;
      in += s(k, z);
      out += s(z, k);
    }
    const double expect = 0.5 * (in / 19.0 / 100.0 + out / 19.0 / 100.0);
    CHECK(token_bleu_feature(toks[pos], world.matrix, path) == doctest::Approx(expect).epsilon(1e-12));
  }
  const auto x = static_cast<Eigen::Index>(reg.index_of("l00"));
  const auto y = static_cast<Eigen::Index>(reg.index_of("l15"));
  double out_x = 0.0, in_y = 0.0;
  for (Eigen::Index k = 0; k < s.rows(); ++k) {
    if (k != x) out_x += s(x, k);
    if (k != y) in_y += s(k, y);
  }
  CHECK(token_bleu_feature(toks[0], world.matrix, path) == doctest::Approx(out_x / 1900.0).epsilon(1e-12));
  CHECK(token_bleu_feature(toks[6], world.matrix, path) == doctest::Approx(in_y / 1900.0).epsilon(1e-12));
}

TEST_CASE("featurize shapes and zero table") {
  const auto world = gen_world({});
  const auto& reg = world.registry();
  const EmbeddingTable<double> zeros = EmbeddingTable<double>::Zero(kEmbeddingDim, 20);

  const auto one = featurize<double>(Path::parse("l00->l01"), world.matrix, zeros);
  CHECK(one.rows() == 6);
  CHECK(one.cols() == 3);

  const auto path = Path::parse("l00->l05->l10->l15");
  const auto three = featurize<double>(path, world.matrix, zeros);
  CHECK(three.rows() == 6);
  CHECK(three.cols() == 7);
  const auto toks = tokenize_path(path);
  for (Eigen::Index t = 0; t < 7; ++t) {
    CHECK(three.col(t).head(5).isZero(0.0));
    CHECK(three(5, t) == token_bleu_feature(toks[static_cast<std::size_t>(t)], world.matrix, path));
  }

  std::mt19937_64 rng(11);
  EmbeddingTable<double> table = EmbeddingTable<double>::Random(kEmbeddingDim, 20);
  for (int i = 0; i < 200; ++i) {
    const auto p = fixtures::random_path(reg, rng);
    const auto f = featurize<double>(p, world.matrix, table);
    CHECK(f.rows() == kFeatureDim);
    CHECK(f.cols() == static_cast<Eigen::Index>(2 * p.hops() + 1));
    CHECK(f == featurize<double>(p, world.matrix, table));
  }
}

TEST_CASE("featurize works at float precision") {
  const auto world = gen_world({});
  const auto enc = encode_path(Path::parse("l00->l05->l10"), world.matrix);
  const EmbeddingTable<float> table = EmbeddingTable<float>::Constant(kEmbeddingDim, 20, 0.25f);
  const auto f = featurize<float>(enc, table);
  CHECK(f.cols() == 5);
  CHECK(f(0, 1) == 0.25f);
  CHECK(f(5, 1) == static_cast<float>(enc.bleu[1]));
}
