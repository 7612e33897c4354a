#pragma once

#include <string>
#include <vector>

#include "ctgp/estimators.hpp"
#include "ctgp/eval.hpp"
#include "ctgp/sim.hpp"

namespace ctgp {

// 17 significant digits, enough to round-trip any double exactly.
std::string format_double(double v);

// Ground truth rows: traj_id,t,p,v,a
void write_truth_csv(const std::string& path, const std::vector<SimTrajectory>& trajs);

struct TruthTrajectory {
  std::vector<double> times;
  std::vector<Eigen::Vector3d> states;
};
std::vector<TruthTrajectory> read_truth_csv(const std::string& path);

// Measurement rows: traj_id,t,channel,y with channel pos|acc
void write_meas_csv(const std::string& path, const std::vector<SimTrajectory>& trajs);

struct MeasTrajectory {
  std::vector<std::pair<double, double>> pos;  // (t, y)
  std::vector<std::pair<double, double>> acc;
};
std::vector<MeasTrajectory> read_meas_csv(const std::string& path);

// Endpoint posteriors: traj_id,method,dim,t,m0,m1,m2,c00,c01,c02,c11,c12,c22
// (unused trailing state entries written as 0 for the 2-state method).
void write_results_csv(const std::string& path, const std::vector<EstimateResult>& results);
std::vector<EstimateResult> read_results_csv(const std::string& path);

// Dense endpoint covariance, upper triangle: traj_id,method,i,j,value
void write_fullcov_csv(const std::string& path, const std::vector<EstimateResult>& results);
void read_fullcov_csv(const std::string& path, std::vector<EstimateResult>& results);

struct MetricRow {
  int traj_id = 0;
  std::string method;
  std::string metric;
  double value = 0.0;
};
void write_metrics_csv(const std::string& path, const std::vector<MetricRow>& rows);
std::vector<MetricRow> read_metrics_csv(const std::string& path);

struct SummaryRow {
  std::string method;
  std::string metric;
  double mean = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double w_lo = 0.0;
  double w_hi = 0.0;
  int n_outliers = 0;
};
void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> read_summary_csv(const std::string& path);

const char* method_name(Method m);
Method method_from_name(const std::string& name);

}  // namespace ctgp
