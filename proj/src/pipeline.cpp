#include "pivotroute/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "pivotroute/checkpoint.hpp"

namespace pivotroute {

namespace {

using nlohmann::ordered_json;

constexpr const char* kManifestFormat = "pivotroute-dataset-v1";

ordered_json pairs_to_json(const std::vector<LanguagePair>& pairs) {
  ordered_json arr = ordered_json::array();
  for (const auto& p : pairs) arr.push_back({p.source, p.target});
  return arr;
}

std::vector<LanguagePair> pairs_from_json(const nlohmann::json& arr) {
  std::vector<LanguagePair> pairs;
  for (const auto& p : arr) pairs.push_back({p.at(0).get<std::string>(), p.at(1).get<std::string>()});
  return pairs;
}

Path best_by_label(const PathLabels& labels) {
  std::vector<ScoredPath> all;
  all.reserve(labels.size());
  for (const auto& [path, bleu] : labels) all.push_back({path, bleu});
  return all[argmax_with_ties(all)].path;
}

std::vector<Path> paths_of(const std::vector<ScoredPath>& scored) {
  std::vector<Path> out;
  out.reserve(scored.size());
  for (const auto& s : scored) out.push_back(s.path);
  return out;
}

/// Labels of one pair read from the experiment's label table.
PathLabels labels_from_table(const PathLabels& table, const PathSet& candidates) {
  PathLabels out;
  for (const auto& p : candidates.paths) {
    auto it = table.find(p);
    if (it == table.end()) throw Error("labels.tsv: no label for " + p.str());
    out.emplace(p, it->second);
  }
  return out;
}

void write_reports(const fs::path& out, const std::string& suffix, const std::vector<MethodReport>& reports) {
  write_file(out / ("report" + suffix + ".tsv"), format_report(reports));
  std::vector<RoutingResult> rows;
  for (const auto& r : reports) {
    write_file(out / ("cdf" + suffix + "_" + r.method + ".csv"), format_cdf(cdf(r.rows)));
  }
  // per-pair listing: pairs in evaluation order, methods in report order
  if (!reports.empty())
    for (std::size_t i = 0; i < reports.front().rows.size(); ++i)
      for (const auto& r : reports) rows.push_back(r.rows[i]);
  write_file(out / ("routes" + suffix + ".tsv"), format_routing_rows(rows));
}

}  // namespace

std::vector<std::string> parse_methods(const std::string& list) {
  std::set<std::string> wanted;
  for (const auto& m : split(list, ',')) {
    if (m.empty()) continue;
    if (std::find(kMethods.begin(), kMethods.end(), m) == kMethods.end()) throw Error("unknown method: " + m);
    wanted.insert(m);
  }
  if (wanted.empty()) throw Error("no methods selected");
  std::vector<std::string> out;
  for (const auto& m : kMethods)
    if (wanted.count(m)) out.push_back(m);
  return out;
}

std::string format_manifest(const Manifest& manifest) {
  ordered_json doc;
  doc["format"] = kManifestFormat;
  if (manifest.world) {
    const auto& w = *manifest.world;
    doc["world"] = {{"num_languages", w.num_languages}, {"num_branches", w.num_branches},
                    {"seed", w.seed},                   {"base_min", w.base_min},
                    {"base_max", w.base_max},           {"resource_weight", w.resource_weight},
                    {"branch_affinity", w.branch_affinity}, {"size_spread", w.size_spread},
                    {"noise_sigma", w.noise_sigma}};
  } else {
    doc["world"] = nullptr;
  }
  const auto& d = manifest.dataset;
  doc["dataset"] = {{"dev_frac", d.dev_frac},
                    {"test_frac", d.test_frac},
                    {"train_path_frac", d.train_path_frac},
                    {"seed", d.seed}};
  doc["splits"] = {{"train", pairs_to_json(manifest.train_pairs)},
                   {"dev", pairs_to_json(manifest.dev_pairs)},
                   {"test", pairs_to_json(manifest.test_pairs)}};
  ordered_json paths = ordered_json::array();
  for (const auto& p : manifest.train_paths) paths.push_back(p.str());
  doc["train_paths"] = std::move(paths);
  return doc.dump(1) + "\n";
}

Manifest parse_manifest(const std::string& text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    if (doc.at("format").get<std::string>() != kManifestFormat) throw Error("dataset.json: unsupported format");
    Manifest m;
    if (!doc.at("world").is_null()) {
      const auto& w = doc.at("world");
      WorldConfig c;
      c.num_languages = w.at("num_languages").get<std::size_t>();
      c.num_branches = w.at("num_branches").get<std::size_t>();
      c.seed = w.at("seed").get<std::uint64_t>();
      c.base_min = w.at("base_min").get<double>();
      c.base_max = w.at("base_max").get<double>();
      c.resource_weight = w.at("resource_weight").get<double>();
      c.branch_affinity = w.at("branch_affinity").get<double>();
      c.size_spread = w.at("size_spread").get<double>();
      c.noise_sigma = w.at("noise_sigma").get<double>();
      m.world = c;
    }
    const auto& d = doc.at("dataset");
    m.dataset = {d.at("dev_frac").get<double>(), d.at("test_frac").get<double>(),
                 d.at("train_path_frac").get<double>(), d.at("seed").get<std::uint64_t>()};
    const auto& s = doc.at("splits");
    m.train_pairs = pairs_from_json(s.at("train"));
    m.dev_pairs = pairs_from_json(s.at("dev"));
    m.test_pairs = pairs_from_json(s.at("test"));
    for (const auto& p : doc.at("train_paths")) m.train_paths.push_back(Path::parse(p.get<std::string>()));
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("dataset.json: ") + e.what());
  }
}

Experiment load_experiment(const fs::path& dir) {
  const DataFiles files{dir};
  for (const auto& f : {files.languages(), files.matrix(), files.labels(), files.manifest()})
    if (!fs::exists(f)) throw Error("missing input file " + f.string());
  auto registry = load_registry(files.languages());
  Experiment ex{load_quality_matrix(files.matrix(), registry), parse_labels(read_file(files.labels())),
                parse_manifest(read_file(files.manifest())), {}};
  const auto& reg = ex.matrix.registry();
  for (const auto* split : {&ex.manifest.train_pairs, &ex.manifest.dev_pairs, &ex.manifest.test_pairs})
    for (const auto& p : *split)
      if (!reg.contains(p.source) || !reg.contains(p.target))
        throw Error("dataset.json: unknown language in pair " + p.source + "->" + p.target);
  PathLabels train_labels;
  for (const auto& p : ex.manifest.train_paths) {
    auto it = ex.labels.find(p);
    if (it == ex.labels.end()) throw Error("labels.tsv: no label for training path " + p.str());
    train_labels.emplace(p, it->second);
  }
  ex.pivot_counts = count_pivots(train_labels, {ex.manifest.train_pairs.begin(), ex.manifest.train_pairs.end()});
  return ex;
}

void cmd_gen(const GenOptions& options) {
  const auto world = gen_world(options.world);
  const auto dataset = build_dataset(world.registry(), world.oracle, options.dataset);

  Manifest manifest{options.world, options.dataset, dataset.train_pairs, dataset.dev_pairs, dataset.test_pairs, {}};
  const std::set<LanguagePair> train(dataset.train_pairs.begin(), dataset.train_pairs.end());
  for (const auto& [path, bleu] : dataset.labels)
    if (train.count({path.source(), path.target()})) manifest.train_paths.push_back(path);

  std::error_code ec;
  fs::create_directories(options.out, ec);
  if (ec) throw Error("cannot create output directory " + options.out.string() + ": " + ec.message());
  const DataFiles files{options.out};
  write_file(files.languages(), format_registry(world.registry()));
  write_file(files.matrix(), format_quality_matrix(world.matrix));
  write_file(files.labels(), format_labels(dataset.labels));
  write_file(files.manifest(), format_manifest(manifest));
}

TrainReport cmd_train(const TrainOptions& options) {
  const auto ex = load_experiment(options.data);
  const auto& reg = ex.matrix.registry();

  std::vector<LabeledSample> samples;
  samples.reserve(ex.manifest.train_paths.size());
  for (const auto& p : ex.manifest.train_paths)
    samples.push_back({encode_path(p, ex.matrix), normalize_bleu(ex.labels.at(p))});

  std::vector<DevPair> dev;
  for (const auto& pair : ex.manifest.dev_pairs) {
    const auto all = candidate_paths(reg, pair);
    const auto best = best_by_label(labels_from_table(ex.labels, all));
    auto kept = filter_rare_pivots(all, ex.pivot_counts, options.pivot_min_count).paths;
    std::sort(kept.begin(), kept.end(), tie_precedes);
    DevPair d;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      if (kept[i] == best) d.best = i;
      d.candidates.push_back(encode_path(kept[i], ex.matrix));
    }
    dev.push_back(std::move(d));
  }

  TrainConfig config = options.config;
  const auto seed = train_seed(config.seed);
  config.seed = seed;
  auto model = init_model<double>(reg.size(), config.hidden_dim, config.num_layers, seed);
  auto [trained, report] = train(std::move(model), samples, dev, config);

  if (options.checkpoint.has_parent_path()) fs::create_directories(options.checkpoint.parent_path());
  save_checkpoint(options.checkpoint, {trained, reg.codes()});
  if (!options.report.empty()) {
    if (options.report.has_parent_path()) fs::create_directories(options.report.parent_path());
    write_file(options.report, format_train_report(report));
  }
  return report;
}

std::vector<MethodReport> evaluate_methods(const QualityMatrix& matrix, const std::vector<LanguagePair>& pairs,
                                           const std::function<PathLabels(const PathSet&)>& labeler,
                                           const LtrModel<double>* model, const PivotCounts& pivot_counts,
                                           const std::vector<std::string>& methods, std::uint64_t seed,
                                           std::size_t pivot_min_count) {
  if (pairs.empty()) throw Error("evaluate: no language pairs");
  const auto& reg = matrix.registry();
  const auto pivot_map = build_pivot_map(reg);

  std::vector<MethodReport> reports;
  std::vector<std::vector<RankedPair>> rankings(methods.size());
  for (const auto& m : methods) reports.push_back({m, 0.0, 0.0, 0.0, {}});

  for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
    const auto& pair = pairs[pi];
    const auto candidates = candidate_paths(reg, pair);
    const auto labels = labeler(candidates);
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      const auto& method = methods[mi];
      std::vector<Path> ranking;
      std::optional<double> predicted;
      if (method == "DT") {
        ranking = {route_direct(pair.source, pair.target)};
      } else if (method == "RR") {
        ranking = {route_random(candidates, router_seed(seed) * 1000003ULL + pi)};
      } else if (method == "PP") {
        ranking = {route_prior_pivot(reg, pair.source, pair.target, pivot_map)};
      } else if (method == "HA") {
        std::vector<ScoredPath> scored;
        for (const auto& p : candidates.paths) scored.push_back({p, hop_average(matrix, p)});
        rank_with_ties(scored);
        predicted = scored.front().score;
        ranking = paths_of(scored);
      } else if (method == "LTR") {
        if (!model) throw Error("evaluate: LTR requires a checkpoint");
        const auto scored = rank_ltr(candidates, matrix, *model, pivot_counts, pivot_min_count);
        predicted = std::clamp(scored.front().score, 0.0, 100.0);
        ranking = paths_of(scored);
      } else if (method == "GT") {
        std::vector<ScoredPath> scored;
        for (const auto& [p, bleu] : labels) scored.push_back({p, bleu});
        rank_with_ties(scored);
        ranking = paths_of(scored);
      }
      const auto& chosen = ranking.front();
      reports[mi].rows.push_back({pair.source, pair.target, method, chosen, predicted, labels.at(chosen)});
      rankings[mi].push_back({std::move(ranking), labels});
    }
  }
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    reports[mi].avg_bleu = avg_selected_bleu(reports[mi].rows);
    reports[mi].top1 = topk_accuracy(rankings[mi], 1);
    reports[mi].top5 = topk_accuracy(rankings[mi], 5);
  }
  return reports;
}

EvalResult cmd_eval(const EvalOptions& options) {
  const auto ex = load_experiment(options.data);
  const auto& reg = ex.matrix.registry();

  std::optional<Checkpoint> checkpoint;
  if (std::find(options.methods.begin(), options.methods.end(), "LTR") != options.methods.end()) {
    if (options.checkpoint.empty()) throw Error("eval: LTR requires --checkpoint");
    if (!fs::exists(options.checkpoint)) throw Error("missing checkpoint " + options.checkpoint.string());
    checkpoint = load_checkpoint(options.checkpoint);
    if (checkpoint->languages != reg.codes()) throw Error("eval: checkpoint languages do not match languages.tsv");
  }
  const LtrModel<double>* model = checkpoint ? &checkpoint->model : nullptr;

  std::error_code ec;
  fs::create_directories(options.out, ec);
  if (ec) throw Error("cannot create output directory " + options.out.string() + ": " + ec.message());

  EvalResult result;
  auto table_labeler = [&](const PathSet& c) { return labels_from_table(ex.labels, c); };
  result.reports = evaluate_methods(ex.matrix, ex.manifest.test_pairs, table_labeler, model, ex.pivot_counts,
                                    options.methods, options.seed, options.pivot_min_count);
  write_reports(options.out, "", result.reports);

  std::vector<RoutingResult> gt;
  for (const auto& pair : ex.manifest.test_pairs) {
    const auto c = candidate_paths(reg, pair);
    const auto best = route_ground_truth(c, table_labeler(c));
    gt.push_back({pair.source, pair.target, "GT", best.path, std::nullopt, best.score});
  }
  result.gt_length_distribution = path_length_distribution(gt);
  std::string lengths;
  for (std::size_t h = 0; h < 3; ++h)
    lengths += std::to_string(h + 1) + '\t' + format_double(result.gt_length_distribution[h]) + '\n';
  write_file(options.out / "gt_lengths.tsv", lengths);

  if (options.supervised_overlay) {
    if (!ex.manifest.world) throw Error("eval: --supervised-overlay needs a generated world (dataset.json has none)");
    std::set<std::string> pivots;
    for (const auto& [branch, code] : build_pivot_map(reg)) pivots.insert(code);
    const auto overlaid =
        apply_supervised_overlay(ex.matrix, pivots, uniform_boost(ex.matrix, pivots, options.overlay_boost));
    const PathOracle oracle(overlaid, ex.manifest.world->seed, ex.manifest.world->noise_sigma);
    auto oracle_labeler = [&](const PathSet& c) { return oracle.label_all(c); };
    result.supervised_reports = evaluate_methods(overlaid, ex.manifest.test_pairs, oracle_labeler, model,
                                                 ex.pivot_counts, options.methods, options.seed,
                                                 options.pivot_min_count);
    write_reports(options.out, "_sup", result.supervised_reports);
  }
  return result;
}

std::vector<RoutingResult> cmd_route(const RouteOptions& options) {
  const auto ex = load_experiment(options.data);
  std::optional<Checkpoint> checkpoint;
  if (options.checkpoint) {
    checkpoint = load_checkpoint(*options.checkpoint);
    if (checkpoint->languages != ex.matrix.registry().codes())
      throw Error("route: checkpoint languages do not match languages.tsv");
  }
  std::vector<std::string> methods;
  for (const auto& m : options.methods) {
    if (m == "LTR" && !checkpoint) continue;
    methods.push_back(m);
  }
  if (options.source == options.target) throw Error("route: source equals target");
  std::function<PathLabels(const PathSet&)> labeler;
  std::optional<PathOracle> oracle;
  if (ex.manifest.world) {
    oracle.emplace(ex.matrix, ex.manifest.world->seed, ex.manifest.world->noise_sigma);
    labeler = [&](const PathSet& c) { return oracle->label_all(c); };
  } else {
    labeler = [&](const PathSet& c) { return labels_from_table(ex.labels, c); };
  }
  const auto reports =
      evaluate_methods(ex.matrix, {{options.source, options.target}}, labeler, checkpoint ? &checkpoint->model : nullptr,
                       ex.pivot_counts, methods, options.seed, options.pivot_min_count);
  std::vector<RoutingResult> rows;
  for (const auto& r : reports) rows.push_back(r.rows.front());
  return rows;
}

std::string cmd_count(std::uint64_t num_languages, double minutes_per_path) {
  if (num_languages < 2) throw Error("count: need at least 2 languages");
  const auto pool = num_languages - 2;
  std::ostringstream out;
  out << "languages\t" << num_languages << '\n';
  out << "pivot_pool\t" << pool << '\n';
  for (int hops = 1; hops <= 3; ++hops) out << "paths_max_hops_" << hops << '\t' << count_paths(pool, hops) << '\n';
  out << "ordered_pairs\t" << num_languages * (num_languages - 1) << '\n';
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", estimate_eval_cost(num_languages, minutes_per_path));
  out << "eval_cost_gpu_days\t" << buf << '\n';
  return out.str();
}

}  // namespace pivotroute
