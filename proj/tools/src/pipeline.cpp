#include "pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "ctgp/estimators.hpp"
#include "ctgp/eval.hpp"
#include "ctgp/gp_traj.hpp"
#include "ctgp/io.hpp"
#include "ctgp/parallel.hpp"

namespace pipeline {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kArtifactVersion = "0.1.0";

void note(const Options& opt, const std::string& msg) {
  if (!opt.quiet) std::cerr << msg << '\n';
}

class StageTimer {
 public:
  void start() { t0_ = std::chrono::steady_clock::now(); }
  void stop(const std::string& stage) {
    const auto t1 = std::chrono::steady_clock::now();
    timings_[stage] = std::chrono::duration<double, std::milli>(t1 - t0_).count();
  }
  json to_json() const {
    json j = json::object();
    for (const auto& [k, v] : timings_) j[k] = v;
    return j;
  }

 private:
  std::chrono::steady_clock::time_point t0_;
  std::map<std::string, double> timings_;
};

void write_manifest(const std::string& out_dir, const std::string& command, const RunConfig& cfg,
                    const std::vector<std::string>& outputs, const StageTimer& timer) {
  json j;
  j["artifact_version"] = kArtifactVersion;
  j["command"] = command;
  j["seed"] = cfg.sim.seed;
  j["config"] = config_to_json(cfg);
  j["outputs"] = outputs;
  j["timings_ms"] = timer.to_json();
  std::ofstream out(out_dir + "/manifest.json");
  if (!out) throw ctgp::MissingInput("cannot write manifest in " + out_dir);
  out << j.dump(2) << '\n';
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ctgp::MissingInput("cannot create directory " + dir + ": " + ec.message());
}

std::vector<ctgp::SimTrajectory> simulate_set(const RunConfig& cfg, int n,
                                              std::uint64_t idx_offset, int threads) {
  std::vector<ctgp::SimTrajectory> out(n);
  ctgp::parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
    ctgp::Rng rng = ctgp::Rng::substream(cfg.sim.seed, idx_offset + i);
    out[i] = ctgp::sample_trajectory(cfg.sim, rng);
    ctgp::corrupt_measurements(out[i], cfg.sim, rng);
  });
  return out;
}

ctgp::MeasurementStream to_stream(const std::vector<std::pair<double, double>>& rows,
                                  int channel_col, double variance) {
  ctgp::MeasurementStream s;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(1, 3);
  c(0, channel_col) = 1.0;
  const Eigen::MatrixXd r = Eigen::MatrixXd::Constant(1, 1, variance);
  for (const auto& [t, y] : rows) {
    ctgp::MeasurementItem item;
    item.time = t;
    item.c = c;
    item.y = Eigen::VectorXd::Constant(1, y);
    item.r = r;
    s.items.push_back(std::move(item));
  }
  return s;
}

std::vector<ctgp::SimTrajectory> load_dataset(const std::string& data_dir, const RunConfig& cfg,
                                              const std::string& prefix) {
  const auto truth = ctgp::read_truth_csv(data_dir + "/" + prefix + "_truth.csv");
  const auto meas = ctgp::read_meas_csv(data_dir + "/" + prefix + "_meas.csv");
  if (truth.size() != meas.size())
    throw ctgp::MissingInput("truth and measurement files disagree on trajectory count");
  std::vector<ctgp::SimTrajectory> out(truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    out[i].times = truth[i].times;
    out[i].states = truth[i].states;
    out[i].pos_meas = to_stream(meas[i].pos, 0, cfg.sim.sigma_pos * cfg.sim.sigma_pos);
    out[i].acc_meas = to_stream(meas[i].acc, 2, cfg.sim.sigma_acc * cfg.sim.sigma_acc);
  }
  return out;
}

json params_to_json(const ctgp::TrainReport& input_report, const ctgp::TrainReport& singer_report) {
  json j;
  j["q_input"] = input_report.q_input;
  j["singer"] = {{"alpha", singer_report.params.alpha}, {"sigma2", singer_report.params.sigma2}};
  j["input_report"] = {{"objective", input_report.objective},
                       {"iterations", input_report.iterations},
                       {"grad_norm", input_report.grad_norm},
                       {"converged", input_report.converged}};
  j["singer_report"] = {{"objective", singer_report.objective},
                        {"iterations", singer_report.iterations},
                        {"grad_norm", singer_report.grad_norm},
                        {"converged", singer_report.converged}};
  return j;
}

struct LearnedParams {
  double q_input = 0.0;
  ctgp::SingerParams singer;
};

LearnedParams read_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ctgp::MissingInput("cannot open params file " + path);
  LearnedParams p;
  try {
    const json j = json::parse(in);
    p.q_input = j.at("q_input").get<double>();
    p.singer.alpha = j.at("singer").at("alpha").get<double>();
    p.singer.sigma2 = j.at("singer").at("sigma2").get<double>();
  } catch (const json::exception& e) {
    throw ctgp::MissingInput(std::string("bad params file ") + path + ": " + e.what());
  }
  return p;
}

// Ground truth at the endpoint grid of a result.
std::vector<Eigen::Vector3d> truth_at(const ctgp::TruthTrajectory& truth,
                                      const std::vector<double>& times) {
  std::vector<Eigen::Vector3d> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(truth.states[ctgp::knot_index(truth.times, t)]);
  return out;
}

ctgp::SummaryRow scalar_row(const std::string& method, const std::string& metric, double value) {
  ctgp::SummaryRow r;
  r.method = method;
  r.metric = metric;
  r.mean = r.median = r.q1 = r.q3 = r.w_lo = r.w_hi = value;
  return r;
}

ctgp::SummaryRow stats_row(const std::string& method, const std::string& metric,
                           const std::vector<double>& values) {
  const ctgp::BoxStats s = ctgp::box_stats(values);
  ctgp::SummaryRow r;
  r.method = method;
  r.metric = metric;
  r.mean = s.mean;
  r.median = s.median;
  r.q1 = s.q1;
  r.q3 = s.q3;
  r.w_lo = s.whisker_lo;
  r.w_hi = s.whisker_hi;
  r.n_outliers = static_cast<int>(s.outliers.size());
  return r;
}

void evaluate_method(const std::vector<ctgp::EstimateResult>& results,
                     const std::vector<ctgp::TruthTrajectory>& truth,
                     std::vector<ctgp::MetricRow>& metrics, std::vector<ctgp::SummaryRow>& summary) {
  if (results.empty()) return;
  if (results.size() > truth.size())
    throw ctgp::MissingInput("more results than ground-truth trajectories");
  const std::string method = ctgp::method_name(results.front().method);

  std::vector<double> mep, mev, rp, rv, nm, nf;
  int dof_m = 0, dof_f = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto t = truth_at(truth[i], results[i].times);
    const ctgp::TrajectoryMetrics m = ctgp::trajectory_metrics(results[i], t);
    if (i == 0) {
      dof_m = m.dof_marginal;
      dof_f = m.dof_full;
    } else if (m.dof_marginal != dof_m || m.dof_full != dof_f) {
      throw ctgp::DimensionMismatch("trajectories disagree on NEES dimensions");
    }
    const int id = static_cast<int>(i);
    metrics.push_back({id, method, "mean_err_pos", m.mean_err_pos});
    metrics.push_back({id, method, "mean_err_vel", m.mean_err_vel});
    metrics.push_back({id, method, "rmse_pos", m.rmse_pos});
    metrics.push_back({id, method, "rmse_vel", m.rmse_vel});
    metrics.push_back({id, method, "nees_marginal", m.nees_marginal});
    metrics.push_back({id, method, "nees_full", m.nees_full});
    mep.push_back(m.mean_err_pos);
    mev.push_back(m.mean_err_vel);
    rp.push_back(m.rmse_pos);
    rv.push_back(m.rmse_vel);
    nm.push_back(m.nees_marginal);
    nf.push_back(m.nees_full);
  }

  summary.push_back(stats_row(method, "mean_err_pos", mep));
  summary.push_back(stats_row(method, "mean_err_vel", mev));
  summary.push_back(stats_row(method, "rmse_pos", rp));
  summary.push_back(stats_row(method, "rmse_vel", rv));
  summary.push_back(stats_row(method, "nees_marginal", nm));
  summary.push_back(stats_row(method, "nees_full", nf));

  const auto bias_pos = ctgp::bias_test(mep);
  const auto bias_vel = ctgp::bias_test(mev);
  summary.push_back(scalar_row(method, "bias_pos_ci_lo", bias_pos.ci_lo));
  summary.push_back(scalar_row(method, "bias_pos_ci_hi", bias_pos.ci_hi));
  summary.push_back(scalar_row(method, "bias_pos_pass", bias_pos.pass ? 1.0 : 0.0));
  summary.push_back(scalar_row(method, "bias_vel_ci_lo", bias_vel.ci_lo));
  summary.push_back(scalar_row(method, "bias_vel_ci_hi", bias_vel.ci_hi));
  summary.push_back(scalar_row(method, "bias_vel_pass", bias_vel.pass ? 1.0 : 0.0));

  // The consistency gate compares the mean NEES against the per-trajectory
  // 95% chi-squared band, the band the box plots are drawn against. The much
  // tighter band for a mean of N draws is reported alongside for reference.
  const double n = static_cast<double>(nf.size());
  double mean_nf = 0.0, mean_nm = 0.0;
  for (std::size_t i = 0; i < nf.size(); ++i) {
    mean_nf += nf[i];
    mean_nm += nm[i];
  }
  mean_nf /= n;
  mean_nm /= n;
  const double f_lo = ctgp::chi2_bound(0.025, dof_f) / static_cast<double>(dof_f);
  const double f_hi = ctgp::chi2_bound(0.975, dof_f) / static_cast<double>(dof_f);
  const double m_lo = ctgp::chi2_bound(0.025, dof_m) / static_cast<double>(dof_m);
  const double m_hi = ctgp::chi2_bound(0.975, dof_m) / static_cast<double>(dof_m);
  summary.push_back(scalar_row(method, "nees_full_mean", mean_nf));
  summary.push_back(scalar_row(method, "nees_full_band_lo", f_lo));
  summary.push_back(scalar_row(method, "nees_full_band_hi", f_hi));
  summary.push_back(
      scalar_row(method, "nees_full_pass", (mean_nf >= f_lo && mean_nf <= f_hi) ? 1.0 : 0.0));
  summary.push_back(scalar_row(method, "nees_marginal_mean", mean_nm));
  summary.push_back(scalar_row(method, "nees_marginal_band_lo", m_lo));
  summary.push_back(scalar_row(method, "nees_marginal_band_hi", m_hi));
  const double ndof_f = n * dof_f;
  summary.push_back(
      scalar_row(method, "nees_full_meanband_lo", ctgp::chi2_bound(0.025, static_cast<int>(ndof_f)) / ndof_f));
  summary.push_back(
      scalar_row(method, "nees_full_meanband_hi", ctgp::chi2_bound(0.975, static_cast<int>(ndof_f)) / ndof_f));
}

void evaluate_dirs(const std::string& results_dir, const std::string& truth_dir,
                   std::vector<ctgp::MetricRow>& metrics, std::vector<ctgp::SummaryRow>& summary) {
  const auto truth = ctgp::read_truth_csv(truth_dir + "/eval_truth.csv");
  for (const char* tag : {"input", "meas"}) {
    auto results = ctgp::read_results_csv(results_dir + "/results_" + std::string(tag) + ".csv");
    ctgp::read_fullcov_csv(results_dir + "/fullcov_" + std::string(tag) + ".csv", results);
    evaluate_method(results, truth, metrics, summary);
  }
}

}  // namespace

json config_to_json(const RunConfig& cfg) {
  json j;
  if (cfg.sim.kind == ctgp::PriorKind::Singer) {
    const auto sp = std::get<ctgp::SingerParams>(cfg.sim.params);
    j["prior"] = {{"kind", "singer"}, {"alpha", sp.alpha}, {"sigma2", sp.sigma2}};
  } else {
    j["prior"] = {{"kind", cfg.sim.kind == ctgp::PriorKind::WNOJ ? "wnoj" : "wnoa"},
                  {"qc", std::get<double>(cfg.sim.params)}};
  }
  j["x0_mean"] = {cfg.sim.x0_mean(0), cfg.sim.x0_mean(1), cfg.sim.x0_mean(2)};
  j["p0_diag"] = {cfg.sim.p0(0, 0), cfg.sim.p0(1, 1), cfg.sim.p0(2, 2)};
  j["duration"] = cfg.sim.duration;
  j["pos_rate"] = cfg.sim.pos_rate;
  j["acc_rate"] = cfg.sim.acc_rate;
  j["sigma_pos"] = cfg.sim.sigma_pos;
  j["sigma_acc"] = cfg.sim.sigma_acc;
  j["n_train"] = cfg.sim.n_train;
  j["n_eval"] = cfg.sim.n_eval;
  j["seed"] = cfg.sim.seed;
  j["r_pos"] = cfg.r_pos;
  j["r_acc"] = cfg.r_acc;
  j["train_init"] = {{"alpha", cfg.train_init.alpha}, {"sigma2", cfg.train_init.sigma2}};
  return j;
}

RunConfig config_from_json(const json& j) {
  RunConfig cfg;
  try {
    const json& prior = j.at("prior");
    const std::string kind = prior.at("kind").get<std::string>();
    if (kind == "singer") {
      cfg.sim.kind = ctgp::PriorKind::Singer;
      cfg.sim.params =
          ctgp::SingerParams{prior.at("alpha").get<double>(), prior.at("sigma2").get<double>()};
    } else if (kind == "wnoj" || kind == "wnoa") {
      cfg.sim.kind = kind == "wnoj" ? ctgp::PriorKind::WNOJ : ctgp::PriorKind::WNOA;
      cfg.sim.params = prior.at("qc").get<double>();
    } else {
      throw ctgp::ConfigParse("unknown prior kind '" + kind + "'");
    }
    const auto x0 = j.at("x0_mean").get<std::vector<double>>();
    const auto p0 = j.at("p0_diag").get<std::vector<double>>();
    if (x0.size() != 3 || p0.size() != 3)
      throw ctgp::ConfigParse("x0_mean and p0_diag must have three entries");
    cfg.sim.x0_mean = Eigen::Vector3d(x0[0], x0[1], x0[2]);
    cfg.sim.p0 = Eigen::Vector3d(p0[0], p0[1], p0[2]).asDiagonal();
    cfg.sim.duration = j.at("duration").get<double>();
    cfg.sim.pos_rate = j.at("pos_rate").get<double>();
    cfg.sim.acc_rate = j.at("acc_rate").get<double>();
    cfg.sim.sigma_pos = j.at("sigma_pos").get<double>();
    cfg.sim.sigma_acc = j.at("sigma_acc").get<double>();
    cfg.sim.n_train = j.at("n_train").get<int>();
    cfg.sim.n_eval = j.at("n_eval").get<int>();
    cfg.sim.seed = j.at("seed").get<std::uint64_t>();
    cfg.r_pos = j.value("r_pos", cfg.sim.sigma_pos * cfg.sim.sigma_pos);
    cfg.r_acc = j.value("r_acc", cfg.sim.sigma_acc * cfg.sim.sigma_acc);
    if (j.contains("train_init")) {
      cfg.train_init.alpha = j.at("train_init").value("alpha", 1.0);
      cfg.train_init.sigma2 = j.at("train_init").value("sigma2", 1.0);
    }
  } catch (const json::exception& e) {
    throw ctgp::ConfigParse(std::string("config error: ") + e.what());
  }
  ctgp::validate_config(cfg.sim);
  return cfg;
}

RunConfig load_config(const std::string& path, const Options& opt) {
  std::ifstream in(path);
  if (!in) throw ctgp::MissingInput("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ctgp::ConfigParse(std::string("config error in ") + path + ": " + e.what());
  }
  RunConfig cfg = config_from_json(j);
  if (opt.seed_set) cfg.sim.seed = opt.seed;
  return cfg;
}

void cmd_simulate(const std::string& config_path, const std::string& out_dir, const Options& opt) {
  const RunConfig cfg = load_config(config_path, opt);
  ensure_dir(out_dir);
  StageTimer timer;
  timer.start();
  note(opt, "simulating " + std::to_string(cfg.sim.n_train) + " training and " +
                std::to_string(cfg.sim.n_eval) + " evaluation trajectories");
  const auto train = simulate_set(cfg, cfg.sim.n_train, 0, opt.threads);
  const auto eval =
      simulate_set(cfg, cfg.sim.n_eval, static_cast<std::uint64_t>(cfg.sim.n_train), opt.threads);
  ctgp::write_truth_csv(out_dir + "/train_truth.csv", train);
  ctgp::write_meas_csv(out_dir + "/train_meas.csv", train);
  ctgp::write_truth_csv(out_dir + "/eval_truth.csv", eval);
  ctgp::write_meas_csv(out_dir + "/eval_meas.csv", eval);
  timer.stop("simulate");
  write_manifest(out_dir, "simulate", cfg,
                 {"train_truth.csv", "train_meas.csv", "eval_truth.csv", "eval_meas.csv"}, timer);
}

void cmd_train(const std::string& config_path, const std::string& data_dir,
               const std::string& out_dir, const Options& opt) {
  const RunConfig cfg = load_config(config_path, opt);
  ensure_dir(out_dir);
  StageTimer timer;
  timer.start();
  const auto trajs = load_dataset(data_dir, cfg, "train");
  note(opt, "training on " + std::to_string(trajs.size()) + " trajectories");
  const ctgp::TrainReport input_report = ctgp::train_input_covariance(trajs, cfg.sim);
  const ctgp::TrainReport singer_report =
      ctgp::train_singer_noiseless(trajs, cfg.sim, cfg.train_init);
  note(opt, "learned q_input=" + ctgp::format_double(input_report.q_input) +
                " alpha=" + ctgp::format_double(singer_report.params.alpha) +
                " sigma2=" + ctgp::format_double(singer_report.params.sigma2));

  std::ofstream params(out_dir + "/params.json");
  if (!params) throw ctgp::MissingInput("cannot write params.json in " + out_dir);
  params << params_to_json(input_report, singer_report).dump(2) << '\n';

  std::ofstream report(out_dir + "/train_report.csv");
  if (!report) throw ctgp::MissingInput("cannot write train_report.csv in " + out_dir);
  report << "method,iter,objective,grad_norm,q_input,alpha,sigma2\n";
  for (const auto& ti : input_report.trace)
    report << "input," << ti.iter << ',' << ctgp::format_double(ti.objective) << ','
           << ctgp::format_double(ti.grad_norm) << ',' << ctgp::format_double(ti.q_input)
           << ",0,0\n";
  for (const auto& ti : singer_report.trace)
    report << "meas," << ti.iter << ',' << ctgp::format_double(ti.objective) << ','
           << ctgp::format_double(ti.grad_norm) << ",0," << ctgp::format_double(ti.params.alpha)
           << ',' << ctgp::format_double(ti.params.sigma2) << '\n';
  timer.stop("train");
  write_manifest(out_dir, "train", cfg, {"params.json", "train_report.csv"}, timer);
}

void cmd_estimate(const std::string& config_path, const std::string& data_dir,
                  const std::string& params_path, const std::string& out_dir, const Options& opt) {
  const RunConfig cfg = load_config(config_path, opt);
  const LearnedParams learned = read_params(params_path);
  ensure_dir(out_dir);
  StageTimer timer;
  timer.start();

  const auto meas = ctgp::read_meas_csv(data_dir + "/eval_meas.csv");
  note(opt, "estimating " + std::to_string(meas.size()) + " trajectories with both methods");

  ctgp::EstimatorConfig input_cfg;
  input_cfg.method = ctgp::Method::InputPreint;
  input_cfg.q_input = learned.q_input;
  input_cfg.r_pos = cfg.r_pos;
  input_cfg.r_acc = cfg.r_acc;
  input_cfg.x0_mean = cfg.sim.x0_mean;
  input_cfg.p0 = cfg.sim.p0;
  ctgp::EstimatorConfig meas_cfg = input_cfg;
  meas_cfg.method = ctgp::Method::MeasurementGP;
  meas_cfg.params = learned.singer;

  std::vector<ctgp::EstimateResult> input_results(meas.size());
  std::vector<ctgp::EstimateResult> meas_results(meas.size());
  const double var_pos = cfg.sim.sigma_pos * cfg.sim.sigma_pos;
  const double var_acc = cfg.sim.sigma_acc * cfg.sim.sigma_acc;
  ctgp::parallel_for(meas.size(), opt.threads, [&](std::size_t i) {
    const auto pos = to_stream(meas[i].pos, 0, var_pos);
    const auto acc = to_stream(meas[i].acc, 2, var_acc);
    input_results[i] = ctgp::run_input_estimator(pos, acc, input_cfg);
    meas_results[i] = ctgp::run_measurement_estimator(pos, acc, meas_cfg);
  });

  ctgp::write_results_csv(out_dir + "/results_input.csv", input_results);
  ctgp::write_fullcov_csv(out_dir + "/fullcov_input.csv", input_results);
  ctgp::write_results_csv(out_dir + "/results_meas.csv", meas_results);
  ctgp::write_fullcov_csv(out_dir + "/fullcov_meas.csv", meas_results);
  timer.stop("estimate");
  write_manifest(out_dir, "estimate", cfg,
                 {"results_input.csv", "fullcov_input.csv", "results_meas.csv", "fullcov_meas.csv"},
                 timer);
}

void cmd_evaluate(const std::string& results_dir, const std::string& truth_dir,
                  const std::string& out_dir, const Options& opt) {
  ensure_dir(out_dir);
  note(opt, "evaluating results in " + results_dir);
  std::vector<ctgp::MetricRow> metrics;
  std::vector<ctgp::SummaryRow> summary;
  evaluate_dirs(results_dir, truth_dir, metrics, summary);
  ctgp::write_metrics_csv(out_dir + "/metrics.csv", metrics);
  ctgp::write_summary_csv(out_dir + "/summary.csv", summary);
}

void cmd_reproduce(const std::string& experiment, const std::string& out_dir, const Options& opt) {
  auto [wnoj, singer] = ctgp::experiment_presets();
  RunConfig cfg;
  if (experiment == "wnoj") {
    cfg.sim = wnoj;
  } else if (experiment == "singer") {
    cfg.sim = singer;
  } else {
    throw ctgp::ConfigParse("unknown experiment '" + experiment + "', expected wnoj or singer");
  }
  cfg.r_pos = cfg.sim.sigma_pos * cfg.sim.sigma_pos;
  cfg.r_acc = cfg.sim.sigma_acc * cfg.sim.sigma_acc;
  if (opt.seed_set) cfg.sim.seed = opt.seed;

  ensure_dir(out_dir);
  const std::string config_path = out_dir + "/config.json";
  {
    std::ofstream out(config_path);
    if (!out) throw ctgp::MissingInput("cannot write config snapshot " + config_path);
    out << config_to_json(cfg).dump(2) << '\n';
  }

  StageTimer timer;
  const std::string data_dir = out_dir + "/data";
  const std::string train_dir = out_dir + "/train";
  const std::string results_dir = out_dir + "/results";

  timer.start();
  cmd_simulate(config_path, data_dir, opt);
  timer.stop("simulate");
  timer.start();
  cmd_train(config_path, data_dir, train_dir, opt);
  timer.stop("train");
  timer.start();
  cmd_estimate(config_path, data_dir, train_dir + "/params.json", results_dir, opt);
  timer.stop("estimate");

  timer.start();
  std::vector<ctgp::MetricRow> metrics;
  std::vector<ctgp::SummaryRow> summary;
  evaluate_dirs(results_dir, data_dir, metrics, summary);
  const LearnedParams learned = read_params(train_dir + "/params.json");
  summary.push_back(scalar_row("input", "q_input", learned.q_input));
  summary.push_back(scalar_row("meas", "alpha", learned.singer.alpha));
  summary.push_back(scalar_row("meas", "sigma2", learned.singer.sigma2));
  ctgp::write_metrics_csv(out_dir + "/metrics.csv", metrics);
  ctgp::write_summary_csv(out_dir + "/summary.csv", summary);
  timer.stop("evaluate");

  write_manifest(out_dir, "reproduce", cfg,
                 {"config.json", "data", "train", "results", "metrics.csv", "summary.csv"}, timer);
  note(opt, "reproduce finished, summary at " + out_dir + "/summary.csv");
}

}  // namespace pipeline
