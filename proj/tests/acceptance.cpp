// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance [work_dir]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "pivotroute/checkpoint.hpp"
#include "pivotroute/pipeline.hpp"

using namespace pivotroute;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s  c%-2d %-28s %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Path random_path(const LanguageRegistry& reg, std::mt19937_64& rng) {
  auto codes = reg.codes();
  std::shuffle(codes.begin(), codes.end(), rng);
  codes.resize(std::uniform_int_distribution<std::size_t>(1, 3)(rng) + 1);
  return Path(codes);
}

void c1_combinatorics() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  for (std::uint64_t p = 0; p <= 30; ++p) {
    std::set<std::string> pool;
    for (std::uint64_t i = 0; i < p; ++i) pool.insert("z" + std::to_string(i));
    // exhaustive: every sequence x, distinct pivots..., y of 0..2 pivots
    std::uint64_t brute = 1;
    for (const auto& a : pool) {
      ++brute;
      for (const auto& b : pool) brute += a != b;
    }
    ok = ok && count_paths(p, 3) == brute && enumerate_paths("x", "y", pool).paths.size() == brute;
  }
  const auto at18 = count_paths(18, 3);
  const double secs = seconds_since(t0);
  report(1, "combinatorics", ok && at18 == 325 && secs < 1.0,
         "count_paths(18,3)=" + std::to_string(at18) + ", P in [0,30] match, " + fmt("%.3f s", secs));
}

void c2_cost() {
  const double m100 = estimate_eval_cost(100), m20 = estimate_eval_cost(20);
  report(2, "cost model", m100 >= 1.30e6 && m100 <= 1.45e6 && m20 >= 1800 && m20 <= 2300,
         fmt("M=100: %.0f GPU-days", m100) + fmt(", M=20: %.1f GPU-days", m20));
}

void c3_features(const World& world) {
  std::mt19937_64 rng(3);
  const auto table = init_model<double>(world.registry().size(), 6, 2, 0).embeddings;
  bool ok = true;
  for (int i = 0; i < 1000; ++i) {
    const auto p = random_path(world.registry(), rng);
    const auto f = featurize<double>(p, world.matrix, table);
    ok = ok && f.rows() == 6 && f.cols() == static_cast<Eigen::Index>(2 * p.hops() + 1);
  }
  report(3, "feature shape", ok, "1000 random paths yield 2h+1 vectors of dim 6");
}

void c4_gradients(const World& world) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0, worst_plain = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    std::mt19937_64 rng(s);
    const auto model = init_model<double>(world.registry().size(), 6, 2, s);
    const auto path = encode_path(random_path(world.registry(), rng), world.matrix);
    const double label = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
    const auto grad = backward(model, path, label);
    worst = std::max(worst, compare_gradients(model, path, label, grad));
    worst_plain = std::max(worst_plain, compare_gradients<double>(model, path, label, grad));
  }
  const double secs = seconds_since(t0);
  report(4, "gradient check", worst < 1e-4 && secs < 10.0,
         fmt("max rel err %.2e", worst) + fmt(" (double-precision probe %.2e)", worst_plain) + fmt(", %.2f s", secs));
}

void c5_hop_average(const World& world) {
  std::mt19937_64 rng(5);
  const auto& scores = world.matrix.scores();
  const auto& reg = world.registry();
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto p = random_path(reg, rng);
    double sum = 0.0;
    for (std::size_t h = 0; h + 1 < p.langs().size(); ++h)
      sum += scores(static_cast<Eigen::Index>(reg.index_of(p.langs()[h])),
                    static_cast<Eigen::Index>(reg.index_of(p.langs()[h + 1])));
    const double oracle = sum / static_cast<double>(p.hops());
    const auto r = route_hop_average(PathSet{p.source(), p.target(), {p}}, world.matrix);
    worst = std::max(worst, std::abs(r.score - oracle));
  }
  report(5, "hop-average oracle", worst <= 1e-12, fmt("max |diff| %.1e over 1000 paths", worst));
}

struct SeedRun {
  std::uint64_t seed;
  fs::path dir;
  double seconds = 0.0;
  TrainReport train;
  EvalResult eval;
  double avg(const std::string& method, bool sup = false) const {
    for (const auto& r : sup ? eval.supervised_reports : eval.reports)
      if (r.method == method) return r.avg_bleu;
    throw Error("no report for " + method);
  }
};

SeedRun run_pipeline(std::uint64_t seed, const fs::path& dir) {
  SeedRun run{seed, dir};
  const auto t0 = std::chrono::steady_clock::now();
  GenOptions g;
  g.world.seed = world_seed(seed);
  g.dataset.seed = dataset_seed(seed);
  g.out = dir / "data";
  cmd_gen(g);
  TrainOptions t;
  t.data = g.out;
  t.checkpoint = dir / "ltr.json";
  t.report = dir / "train.tsv";
  t.config.seed = seed;
  run.train = cmd_train(t);
  EvalOptions e;
  e.data = g.out;
  e.checkpoint = t.checkpoint;
  e.out = dir / "eval";
  e.seed = seed;
  e.supervised_overlay = true;
  run.eval = cmd_eval(e);
  run.seconds = seconds_since(t0);
  return run;
}

void c6_gt_dominance(const SeedRun& run) {
  const auto& reports = run.eval.reports;
  const auto& gt = reports.back();
  std::size_t ok = 0, total = 0;
  for (std::size_t p = 0; p < gt.rows.size(); ++p) {
    bool dominates = true;
    for (const auto& r : reports) dominates = dominates && *r.rows[p].actual <= *gt.rows[p].actual;
    ok += dominates;
    ++total;
  }
  report(6, "GT dominance", gt.method == "GT" && ok == total,
         std::to_string(ok) + "/" + std::to_string(total) + " seed-0 test pairs");
}

void c7_ordering(const std::vector<SeedRun>& runs) {
  bool ok = true;
  int gap_ok = 0;
  double slowest = 0.0;
  std::string detail;
  for (const auto& r : runs) {
    const double dt = r.avg("DT"), rr = r.avg("RR"), ha = r.avg("HA"), ltr = r.avg("LTR"), gt = r.avg("GT");
    const bool order = rr < std::min(dt, ha) && dt <= ha && ha <= ltr + 0.2 && ltr <= gt;
    ok = ok && order;
    gap_ok += (gt - ltr) <= 0.6 * (gt - ha);
    slowest = std::max(slowest, r.seconds);
    char buf[200];
    std::snprintf(buf, sizeof buf, "[s%llu DT %.2f RR %.2f HA %.2f PP %.2f LTR %.2f GT %.2f%s] ",
                  static_cast<unsigned long long>(r.seed), dt, rr, ha, r.avg("PP"), ltr, gt, order ? "" : " !");
    detail += buf;
  }
  report(7, "method ordering", ok && gap_ok >= 2 && slowest < 300.0,
         detail + "LTR gap ok on " + std::to_string(gap_ok) + "/3" + fmt(", slowest pipeline %.0f s", slowest));
}

void c8_overlay(const std::vector<SeedRun>& runs) {
  bool ok = true;
  std::string detail;
  for (const auto& r : runs) {
    const bool seed_ok = r.avg("GT", true) > r.avg("GT") && r.avg("LTR", true) > r.avg("LTR") &&
                         r.avg("DT", true) == r.avg("DT");
    ok = ok && seed_ok;
    char buf[200];
    std::snprintf(buf, sizeof buf, "[s%llu DT %.2f->%.2f LTR %.2f->%.2f GT %.2f->%.2f] ",
                  static_cast<unsigned long long>(r.seed), r.avg("DT"), r.avg("DT", true), r.avg("LTR"),
                  r.avg("LTR", true), r.avg("GT"), r.avg("GT", true));
    detail += buf;
  }
  report(8, "supervised overlay", ok, detail);
}

void c9_determinism(const SeedRun& first, const fs::path& dir) {
  const auto second = run_pipeline(first.seed, dir);
  std::vector<std::string> files{"ltr.json", "train.tsv", "eval/report.tsv", "eval/report_sup.tsv", "eval/routes.tsv",
                                  "eval/routes_sup.tsv"};
  for (const auto& m : kMethods) {
    files.push_back("eval/cdf_" + m + ".csv");
    files.push_back("eval/cdf_sup_" + m + ".csv");
  }
  std::size_t same = 0;
  for (const auto& f : files) same += read_file(first.dir / f) == read_file(second.dir / f);
  report(9, "determinism", same == files.size(),
         std::to_string(same) + "/" + std::to_string(files.size()) + " files byte-identical across two seed-0 runs");
}

void c10_training(const SeedRun& run) {
  const double ratio = run.train.final_mse / run.train.initial_mse;
  report(10, "training sanity", ratio < 0.5,
         fmt("initial %.3e", run.train.initial_mse) + fmt(", final %.3e", run.train.final_mse) +
             fmt(", ratio %.4f", ratio));
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "pivotroute_acceptance";
  try {
    fs::remove_all(work);
    fs::create_directories(work);
    const auto world = gen_world({});

    c1_combinatorics();
    c2_cost();
    c3_features(world);
    c4_gradients(world);
    c5_hop_average(world);

    std::vector<SeedRun> runs;
    for (std::uint64_t seed : {0, 1, 2}) runs.push_back(run_pipeline(seed, work / ("seed" + std::to_string(seed))));
    c6_gt_dominance(runs[0]);
    c7_ordering(runs);
    c8_overlay(runs);
    c9_determinism(runs[0], work / "seed0_rerun");
    c10_training(runs[0]);
  } catch (const std::exception& e) {
    std::printf("FAIL  aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%s: %d criteria failed\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
