#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "ctgp/learn.hpp"
#include "ctgp/sim.hpp"

namespace pipeline {

struct Options {
  bool seed_set = false;
  std::uint64_t seed = 0;
  int threads = 1;
  bool quiet = false;
};

struct RunConfig {
  ctgp::SimConfig sim;
  double r_pos = 1e-4;
  double r_acc = 1e-4;
  ctgp::SingerParams train_init{1.0, 1.0};
};

RunConfig load_config(const std::string& path, const Options& opt);
nlohmann::json config_to_json(const RunConfig& cfg);
RunConfig config_from_json(const nlohmann::json& j);

void cmd_simulate(const std::string& config_path, const std::string& out_dir, const Options& opt);
void cmd_train(const std::string& config_path, const std::string& data_dir,
               const std::string& out_dir, const Options& opt);
void cmd_estimate(const std::string& config_path, const std::string& data_dir,
                  const std::string& params_path, const std::string& out_dir, const Options& opt);
void cmd_evaluate(const std::string& results_dir, const std::string& truth_dir,
                  const std::string& out_dir, const Options& opt);
void cmd_reproduce(const std::string& experiment, const std::string& out_dir, const Options& opt);

}  // namespace pipeline
