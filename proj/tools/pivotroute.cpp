#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "pivotroute/pipeline.hpp"

using namespace pivotroute;

int main(int argc, char** argv) {
  CLI::App app{"Pivot-path routing for distant language pairs"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string methods = "DT,RR,HA,PP,LTR,GT";
  std::size_t pivot_min_count = 10;

  // gen
  GenOptions gen;
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic world and routing dataset");
  gen_cmd->add_option("--languages", gen.world.num_languages, "Number of languages")->capture_default_str();
  gen_cmd->add_option("--branches", gen.world.num_branches, "Number of language branches")->capture_default_str();
  gen_cmd->add_option("--seed", seed, "Master seed")->capture_default_str();
  gen_cmd->add_option("--base-min", gen.world.base_min)->capture_default_str();
  gen_cmd->add_option("--base-max", gen.world.base_max)->capture_default_str();
  gen_cmd->add_option("--resource-weight", gen.world.resource_weight)->capture_default_str();
  gen_cmd->add_option("--affinity", gen.world.branch_affinity, "Extra BLEU for same-branch hops")->capture_default_str();
  gen_cmd->add_option("--size-spread", gen.world.size_spread)->capture_default_str();
  gen_cmd->add_option("--noise", gen.world.noise_sigma, "Relative sigma of multi-hop noise")->capture_default_str();
  gen_cmd->add_option("--dev-frac", gen.dataset.dev_frac)->capture_default_str();
  gen_cmd->add_option("--test-frac", gen.dataset.test_frac)->capture_default_str();
  gen_cmd->add_option("--train-path-frac", gen.dataset.train_path_frac)->capture_default_str();
  gen_cmd->add_option("--out", gen_out, "Output directory")->required();

  // train
  TrainOptions tr;
  std::string tr_data, tr_ckpt, tr_report;
  auto* train_cmd = app.add_subcommand("train", "Train the path-quality model");
  train_cmd->add_option("--data", tr_data, "Experiment directory written by gen")->required();
  train_cmd->add_option("--checkpoint", tr_ckpt, "Output checkpoint (JSON)")->required();
  train_cmd->add_option("--report", tr_report, "Output training report (TSV)");
  train_cmd->add_option("--seed", seed, "Master seed")->capture_default_str();
  train_cmd->add_option("--lr", tr.config.learning_rate, "Adam learning rate")->capture_default_str();
  train_cmd->add_option("--epochs", tr.config.epochs)->capture_default_str();
  train_cmd->add_option("--batch-size", tr.config.batch_size)->capture_default_str();
  train_cmd->add_option("--hidden", tr.config.hidden_dim, "LSTM hidden size")->capture_default_str();
  train_cmd->add_option("--layers", tr.config.num_layers, "LSTM layers")->capture_default_str();
  train_cmd->add_option("--pivot-min-count", pivot_min_count)->capture_default_str();

  // eval
  EvalOptions ev;
  std::string ev_data, ev_ckpt, ev_out;
  auto* eval_cmd = app.add_subcommand("eval", "Route every test pair with each method and report");
  eval_cmd->add_option("--data", ev_data)->required();
  eval_cmd->add_option("--checkpoint", ev_ckpt);
  eval_cmd->add_option("--out", ev_out)->required();
  eval_cmd->add_option("--methods", methods, "Comma separated subset of DT,RR,HA,PP,LTR,GT")->capture_default_str();
  eval_cmd->add_option("--seed", seed, "Master seed")->capture_default_str();
  eval_cmd->add_option("--pivot-min-count", pivot_min_count)->capture_default_str();
  eval_cmd->add_flag("--supervised-overlay", ev.supervised_overlay, "Also evaluate with supervised pivot hops");
  eval_cmd->add_option("--overlay-boost", ev.overlay_boost, "BLEU added to supervised edges")->capture_default_str();

  // route
  RouteOptions ro;
  std::string ro_data, ro_ckpt;
  auto* route_cmd = app.add_subcommand("route", "Route a single language pair");
  route_cmd->add_option("--data", ro_data)->required();
  route_cmd->add_option("--checkpoint", ro_ckpt);
  route_cmd->add_option("--src", ro.source)->required();
  route_cmd->add_option("--tgt", ro.target)->required();
  route_cmd->add_option("--methods", methods)->capture_default_str();
  route_cmd->add_option("--seed", seed)->capture_default_str();
  route_cmd->add_option("--pivot-min-count", pivot_min_count)->capture_default_str();

  // count
  std::uint64_t count_langs = 20;
  double minutes = 20.0;
  auto* count_cmd = app.add_subcommand("count", "Path counts and brute-force evaluation cost");
  count_cmd->add_option("--languages", count_langs)->capture_default_str();
  count_cmd->add_option("--minutes-per-path", minutes)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*gen_cmd) {
      gen.world.seed = world_seed(seed);
      gen.dataset.seed = dataset_seed(seed);
      gen.out = gen_out;
      cmd_gen(gen);
    } else if (*train_cmd) {
      tr.data = tr_data;
      tr.checkpoint = tr_ckpt;
      tr.report = tr_report;
      tr.config.seed = seed;
      tr.pivot_min_count = pivot_min_count;
      const auto report = cmd_train(tr);
      std::cout << "initial_mse\t" << format_double(report.initial_mse) << "\nfinal_mse\t"
                << format_double(report.final_mse) << "\nselected_epoch\t" << report.selected_epoch << '\n';
    } else if (*eval_cmd) {
      ev.data = ev_data;
      ev.checkpoint = ev_ckpt;
      ev.out = ev_out;
      ev.methods = parse_methods(methods);
      ev.seed = seed;
      ev.pivot_min_count = pivot_min_count;
      const auto result = cmd_eval(ev);
      std::cout << format_report(result.reports);
      if (ev.supervised_overlay) std::cout << "# supervised overlay\n" << format_report(result.supervised_reports);
    } else if (*route_cmd) {
      ro.data = ro_data;
      if (!ro_ckpt.empty()) ro.checkpoint = ro_ckpt;
      ro.methods = parse_methods(methods);
      ro.seed = seed;
      ro.pivot_min_count = pivot_min_count;
      std::cout << format_routing_rows(cmd_route(ro));
    } else if (*count_cmd) {
      std::cout << cmd_count(count_langs, minutes);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
