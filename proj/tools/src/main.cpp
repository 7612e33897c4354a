#include <CLI11.hpp>
#include <iostream>
#include <thread>

#include "ctgp/errors.hpp"
#include "pipeline.hpp"

namespace {

int dispatch(const std::function<void()>& run) {
  try {
    run();
    return 0;
  } catch (const ctgp::ConfigParse& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const ctgp::NotPositiveDefinite& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 4;
  } catch (const ctgp::NonFiniteObjective& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 4;
  } catch (const ctgp::SingularCovariance& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 4;
  } catch (const std::runtime_error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous-time trajectory estimation experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  pipeline::Options opt;
  opt.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "Override the config seed");
  app.add_option("--threads", opt.threads, "Cap worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", opt.quiet, "Suppress progress output");

  std::string config_path, data_dir, params_path, out_dir, results_dir, truth_dir, experiment;

  auto* sim = app.add_subcommand("simulate", "Sample trajectories and synthesize measurements");
  sim->add_option("--config", config_path, "Config JSON")->required();
  sim->add_option("--out", out_dir, "Output directory")->required();

  auto* train = app.add_subcommand("train", "Learn method parameters from the training set");
  train->add_option("--config", config_path, "Config JSON")->required();
  train->add_option("--data", data_dir, "Directory with train_truth.csv and train_meas.csv")
      ->required();
  train->add_option("--out", out_dir, "Output directory")->required();

  auto* est = app.add_subcommand("estimate", "Run both estimators over the evaluation set");
  est->add_option("--config", config_path, "Config JSON")->required();
  est->add_option("--data", data_dir, "Directory with eval_meas.csv")->required();
  est->add_option("--params", params_path, "params.json from the train stage")->required();
  est->add_option("--out", out_dir, "Output directory")->required();

  auto* ev = app.add_subcommand("evaluate", "Compute metrics and summary statistics");
  ev->add_option("--results", results_dir, "Directory with results and covariance CSVs")
      ->required();
  ev->add_option("--truth", truth_dir, "Directory with eval_truth.csv")->required();
  ev->add_option("--out", out_dir, "Output directory")->required();

  auto* rep = app.add_subcommand("reproduce", "Full pipeline for a named experiment preset");
  rep->add_option("experiment", experiment, "wnoj or singer")->required();
  rep->add_option("--out", out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  opt.seed_set = seed_opt->count() > 0;
  opt.seed = seed_value;

  if (sim->parsed()) return dispatch([&] { pipeline::cmd_simulate(config_path, out_dir, opt); });
  if (train->parsed())
    return dispatch([&] { pipeline::cmd_train(config_path, data_dir, out_dir, opt); });
  if (est->parsed())
    return dispatch(
        [&] { pipeline::cmd_estimate(config_path, data_dir, params_path, out_dir, opt); });
  if (ev->parsed())
    return dispatch([&] { pipeline::cmd_evaluate(results_dir, truth_dir, out_dir, opt); });
  if (rep->parsed()) return dispatch([&] { pipeline::cmd_reproduce(experiment, out_dir, opt); });
  return 2;
}
