#include <doctest.h>

#include <set>

#include "fixtures.hpp"
#include "pivotroute/synthworld.hpp"

using namespace pivotroute;

TEST_CASE("gen_world layout") {
  const auto world = gen_world({});
  const auto& reg = world.registry();
  REQUIRE(reg.size() == 20);
  CHECK(reg.at(0).code == "l00");
  CHECK(reg.at(19).code == "l19");
  CHECK(reg.branch_set().size() == 4);
  std::map<std::string, int> per_branch;
  for (const auto& l : reg.languages()) {
    ++per_branch[l.branch];
    CHECK(l.mono_size >= 100000);
    CHECK(l.mono_size <= 100000000);
  }
  for (const auto& [b, n] : per_branch) CHECK(n == 5);
  for (std::size_t s = 0; s < 20; ++s)
    for (std::size_t t = 0; t < 20; ++t)
      if (s != t) {
        CHECK(world.matrix.score(s, t) >= 0.0);
        CHECK(world.matrix.score(s, t) <= 100.0);
      }
  CHECK_FALSE(world.matrix.has_supervised_edges());
}

TEST_CASE("same-branch hops are stronger on average") {
  const auto world = gen_world({});
  const auto& reg = world.registry();
  double near = 0, far = 0;
  int nn = 0, nf = 0;
  for (std::size_t s = 0; s < 20; ++s)
    for (std::size_t t = 0; t < 20; ++t) {
      if (s == t) continue;
      if (reg.at(s).branch == reg.at(t).branch) near += world.matrix.score(s, t), ++nn;
      else far += world.matrix.score(s, t), ++nf;
    }
  CHECK(near / nn > far / nf + 30.0);
}

TEST_CASE("gen_world is deterministic in the seed") {
  WorldConfig c;
  c.seed = 4;
  const auto a = gen_world(c);
  const auto b = gen_world(c);
  CHECK(a.matrix == b.matrix);
  CHECK(a.registry().languages() == b.registry().languages());
  const auto p = Path::parse("l00->l05->l10->l15");
  CHECK(a.oracle.label(p) == b.oracle.label(p));
  c.seed = 5;
  CHECK_FALSE(gen_world(c).matrix == a.matrix);
}

TEST_CASE("world config validation") {
  WorldConfig c;
  c.num_branches = 1;
  CHECK_THROWS_AS(gen_world(c), Error);
  c = {};
  c.num_branches = 21;
  CHECK_THROWS_AS(gen_world(c), Error);
  c = {};
  c.base_min = 50;
  c.base_max = 40;
  CHECK_THROWS_AS(gen_world(c), Error);
  c = {};
  c.resource_weight = 1.5;
  CHECK_THROWS_AS(gen_world(c), Error);
  c = {};
  c.noise_sigma = -0.1;
  CHECK_THROWS_AS(gen_world(c), Error);
}

TEST_CASE("oracle composition") {
  const auto reg = fixtures::make_registry({{"a", "X", 1}, {"b", "Y", 1}, {"c", "Z", 1}, {"d", "W", 1}});
  QualityMatrix m(reg);
  for (std::size_t s = 0; s < 4; ++s)
    for (std::size_t t = 0; t < 4; ++t)
      if (s != t) m.set_score(s, t, 50.0);
  m.set_score(0, 1, 6.56);
  const PathOracle exact(m, 0, 0.0);
  CHECK(exact.label(Path::parse("a->b")) == 6.56);
  CHECK(exact.label(Path::parse("a->c->b")) == 25.0);
  CHECK(exact.label(Path::parse("a->c->d->b")) == 12.5);

  const PathOracle noisy(m, 9, 0.1);
  CHECK(noisy.label(Path::parse("a->b")) == 6.56);
  const auto p = Path::parse("a->c->d->b");
  CHECK(noisy.label(p) == doctest::Approx(12.5 * (1.0 + path_noise(9, p, 0.1))));
  CHECK(path_noise(9, p, 0.0) == 0.0);
  CHECK(path_noise(9, p, 0.1) == path_noise(9, p, 0.1));
  CHECK(path_noise(9, p, 0.1) != path_noise(10, p, 0.1));
}

TEST_CASE("oracle is monotone in each hop and never beats its weakest hop") {
  const auto world = gen_world({});
  const PathOracle exact(world.matrix, 0, 0.0);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 500; ++i) {
    const auto p = fixtures::random_path(world.registry(), rng);
    const auto hops = hop_scores(world.matrix, p);
    CHECK(exact.label(p) <= *std::min_element(hops.begin(), hops.end()) + 1e-12);
    if (p.hops() < 2) continue;
    auto better = world.matrix;
    const auto s = world.registry().index_of(p.langs()[0]);
    const auto t = world.registry().index_of(p.langs()[1]);
    better.set_score(s, t, std::min(100.0, better.score(s, t) + 10.0));
    CHECK(PathOracle(better, 0, 0.0).label(p) >= exact.label(p));
  }
}

TEST_CASE("distant pairs and split sizes") {
  const auto world = gen_world({});
  const auto pairs = distant_pairs(world.registry());
  CHECK(pairs.size() == 300);
  CHECK(distant_pairs(fixtures::reconstructed_registry()).size() == 294);
  CHECK(split_size(300, 0.05) == 16);
  CHECK(split_size(300, 0.10) == 30);
  CHECK(split_size(294, 0.05) == 14);
  CHECK(candidate_paths(world.registry(), pairs[0]).paths.size() == 325);
}

TEST_CASE("build_dataset splits") {
  const auto world = gen_world({});
  const auto ds = build_dataset(world.registry(), world.oracle, {});
  CHECK(ds.dev_pairs.size() == 16);
  CHECK(ds.test_pairs.size() == 30);
  CHECK(ds.train_pairs.size() == 254);

  std::set<LanguagePair> train(ds.train_pairs.begin(), ds.train_pairs.end());
  std::set<LanguagePair> dev(ds.dev_pairs.begin(), ds.dev_pairs.end());
  std::set<LanguagePair> test(ds.test_pairs.begin(), ds.test_pairs.end());
  std::set<LanguagePair> all;
  for (const auto* s : {&train, &dev, &test})
    for (const auto& p : *s) {
      CHECK(all.insert(p).second);
      CHECK(s->count({p.target, p.source}) == 1);
      CHECK(is_distant(world.registry(), p.source, p.target));
    }
  CHECK(all.size() == 300);

  std::map<LanguagePair, int> sampled;
  std::set<LanguagePair> with_direct;
  for (const auto& [p, v] : ds.labels) {
    ++sampled[{p.source(), p.target()}];
    if (p.hops() == 1) with_direct.insert({p.source(), p.target()});
  }
  for (const auto& pair : ds.train_pairs) {
    CHECK(with_direct.count(pair));
    CHECK(sampled[pair] == 33);
  }
  for (const auto& pair : ds.dev_pairs) CHECK(sampled[pair] == 325);
  for (const auto& pair : ds.test_pairs)
    for (const auto& p : candidate_paths(world.registry(), pair).paths) {
      REQUIRE(ds.labels.count(p));
      CHECK(ds.labels.at(p) == world.oracle.label(p));
    }

  PivotCounts recount;
  for (const auto& [p, v] : ds.labels)
    if (train.count({p.source(), p.target()}))
      for (const auto& z : p.pivots()) ++recount[z];
  CHECK(recount == ds.pivot_counts);

  CHECK(build_dataset(world.registry(), world.oracle, {}) == ds);
  CHECK_FALSE(build_dataset(world.registry(), world.oracle, {0.05, 0.10, 0.10, 2}).test_pairs == ds.test_pairs);
}

TEST_CASE("build_dataset rejects degenerate worlds") {
  const auto reg = fixtures::make_registry({{"a", "X", 1}, {"b", "Y", 1}, {"c", "X", 1}});
  const PathOracle oracle(fixtures::random_matrix(reg, 0), 0, 0.0);
  CHECK_THROWS_AS(build_dataset(reg, oracle, {}), Error);
  const auto world = gen_world({});
  CHECK_THROWS_AS(build_dataset(world.registry(), world.oracle, {0.0, 0.1, 0.1, 1}), Error);
}

TEST_CASE("supervised overlay") {
  const auto reg = fixtures::reconstructed_registry();
  const auto m = fixtures::random_matrix(reg, 7);
  const std::set<std::string> pivots{"en", "de", "es", "fr", "fi", "ru"};

  CHECK(apply_supervised_overlay(m, pivots, {}) == m);

  const double en_es = m.score("en", "es");
  const auto boosted = apply_supervised_overlay(m, pivots, {{{"en", "es"}, std::min(100.0, en_es + 20.0)}});
  const PathOracle before(m, 0, 0.0), after(boosted, 0, 0.0);
  const auto via = Path::parse("da->en->es->gl");
  const auto direct = Path::parse("da->gl");
  if (en_es < 100.0) CHECK(after.label(via) > before.label(via));
  CHECK(after.label(direct) == before.label(direct));
  // supervised edges never count outside the middle hop
  CHECK(after.label(Path::parse("en->es->gl")) == before.label(Path::parse("en->es->gl")));
  CHECK(after.label(Path::parse("en->es")) == before.label(Path::parse("en->es")));

  CHECK_THROWS_AS(apply_supervised_overlay(m, pivots, {{{"da", "es"}, 100.0}}), Error);
  CHECK_THROWS_AS(apply_supervised_overlay(m, pivots, {{{"en", "es"}, en_es - 1.0}}), Error);

  const auto boost = uniform_boost(m, pivots, 20.0);
  CHECK(boost.size() == 30);
  for (const auto& [edge, v] : boost) CHECK(v == std::min(100.0, m.score(edge.first, edge.second) + 20.0));
}

TEST_CASE("labels TSV round-trip") {
  const PathLabels labels{{Path::parse("da->gl"), 6.56}, {Path::parse("da->en->es->gl"), 12.14}};
  CHECK(parse_labels(format_labels(labels)) == labels);
  CHECK_THROWS_AS(parse_labels("da->gl\t101\n"), Error);
  CHECK_THROWS_AS(parse_labels("da->gl\n"), Error);
  CHECK_THROWS_AS(parse_labels("da->gl\t1\nda->gl\t2\n"), Error);
}
