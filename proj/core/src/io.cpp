#include "ctgp/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "ctgp/errors.hpp"

namespace ctgp {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw MissingInput("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingInput("cannot open for reading: " + path);
  return in;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

double to_double(const std::string& s, const std::string& path) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) throw MissingInput("malformed number '" + s + "' in " + path);
  return v;
}

int to_int(const std::string& s, const std::string& path) {
  return static_cast<int>(to_double(s, path));
}

void expect_header(std::ifstream& in, const std::string& expected, const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) throw MissingInput("empty file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected)
    throw MissingInput("unexpected header in " + path + ": got '" + line + "'");
}

}  // namespace

const char* method_name(Method m) { return m == Method::InputPreint ? "input" : "meas"; }

Method method_from_name(const std::string& name) {
  if (name == "input") return Method::InputPreint;
  if (name == "meas") return Method::MeasurementGP;
  throw MissingInput("unknown method tag '" + name + "'");
}

void write_truth_csv(const std::string& path, const std::vector<SimTrajectory>& trajs) {
  auto out = open_out(path);
  out << "traj_id,t,p,v,a\n";
  for (std::size_t id = 0; id < trajs.size(); ++id)
    for (std::size_t k = 0; k < trajs[id].times.size(); ++k) {
      const auto& x = trajs[id].states[k];
      out << id << ',' << format_double(trajs[id].times[k]) << ',' << format_double(x(0)) << ','
          << format_double(x(1)) << ',' << format_double(x(2)) << '\n';
    }
}

std::vector<TruthTrajectory> read_truth_csv(const std::string& path) {
  auto in = open_in(path);
  expect_header(in, "traj_id,t,p,v,a", path);
  std::vector<TruthTrajectory> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_line(line);
    if (f.size() != 5) throw MissingInput("bad row in " + path);
    const std::size_t id = static_cast<std::size_t>(to_int(f[0], path));
    if (id >= out.size()) out.resize(id + 1);
    out[id].times.push_back(to_double(f[1], path));
    out[id].states.emplace_back(to_double(f[2], path), to_double(f[3], path), to_double(f[4], path));
  }
  return out;
}

void write_meas_csv(const std::string& path, const std::vector<SimTrajectory>& trajs) {
  auto out = open_out(path);
  out << "traj_id,t,channel,y\n";
  for (std::size_t id = 0; id < trajs.size(); ++id) {
    for (const auto& item : trajs[id].pos_meas.items)
      out << id << ',' << format_double(item.time) << ",pos," << format_double(item.y(0)) << '\n';
    for (const auto& item : trajs[id].acc_meas.items)
      out << id << ',' << format_double(item.time) << ",acc," << format_double(item.y(0)) << '\n';
  }
}

std::vector<MeasTrajectory> read_meas_csv(const std::string& path) {
  auto in = open_in(path);
  expect_header(in, "traj_id,t,channel,y", path);
  std::vector<MeasTrajectory> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_line(line);
    if (f.size() != 4) throw MissingInput("bad row in " + path);
    const std::size_t id = static_cast<std::size_t>(to_int(f[0], path));
    if (id >= out.size()) out.resize(id + 1);
    const double t = to_double(f[1], path);
    const double y = to_double(f[3], path);
    if (f[2] == "pos")
      out[id].pos.emplace_back(t, y);
    else if (f[2] == "acc")
      out[id].acc.emplace_back(t, y);
    else
      throw MissingInput("unknown channel '" + f[2] + "' in " + path);
  }
  return out;
}

void write_results_csv(const std::string& path, const std::vector<EstimateResult>& results) {
  auto out = open_out(path);
  out << "traj_id,method,dim,t,m0,m1,m2,c00,c01,c02,c11,c12,c22\n";
  for (std::size_t id = 0; id < results.size(); ++id) {
    const auto& r = results[id];
    for (std::size_t k = 0; k < r.times.size(); ++k) {
      Eigen::Vector3d m = Eigen::Vector3d::Zero();
      Eigen::Matrix3d c = Eigen::Matrix3d::Zero();
      m.head(r.dim) = r.means[k];
      c.topLeftCorner(r.dim, r.dim) = r.covs[k];
      out << id << ',' << method_name(r.method) << ',' << r.dim << ','
          << format_double(r.times[k]) << ',' << format_double(m(0)) << ','
          << format_double(m(1)) << ',' << format_double(m(2)) << ',' << format_double(c(0, 0))
          << ',' << format_double(c(0, 1)) << ',' << format_double(c(0, 2)) << ','
          << format_double(c(1, 1)) << ',' << format_double(c(1, 2)) << ','
          << format_double(c(2, 2)) << '\n';
    }
  }
}

std::vector<EstimateResult> read_results_csv(const std::string& path) {
  auto in = open_in(path);
  expect_header(in, "traj_id,method,dim,t,m0,m1,m2,c00,c01,c02,c11,c12,c22", path);
  std::vector<EstimateResult> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_line(line);
    if (f.size() != 13) throw MissingInput("bad row in " + path);
    const std::size_t id = static_cast<std::size_t>(to_int(f[0], path));
    if (id >= out.size()) out.resize(id + 1);
    auto& r = out[id];
    r.method = method_from_name(f[1]);
    r.dim = to_int(f[2], path);
    r.times.push_back(to_double(f[3], path));
    Eigen::VectorXd m(r.dim);
    for (int i = 0; i < r.dim; ++i) m(i) = to_double(f[4 + i], path);
    Eigen::Matrix3d c;
    c(0, 0) = to_double(f[7], path);
    c(0, 1) = c(1, 0) = to_double(f[8], path);
    c(0, 2) = c(2, 0) = to_double(f[9], path);
    c(1, 1) = to_double(f[10], path);
    c(1, 2) = c(2, 1) = to_double(f[11], path);
    c(2, 2) = to_double(f[12], path);
    r.means.push_back(m);
    r.covs.push_back(c.topLeftCorner(r.dim, r.dim));
  }
  return out;
}

void write_fullcov_csv(const std::string& path, const std::vector<EstimateResult>& results) {
  auto out = open_out(path);
  out << "traj_id,method,i,j,value\n";
  for (std::size_t id = 0; id < results.size(); ++id) {
    const auto& c = results[id].full_cov;
    for (Eigen::Index i = 0; i < c.rows(); ++i)
      for (Eigen::Index j = i; j < c.cols(); ++j)
        out << id << ',' << method_name(results[id].method) << ',' << i << ',' << j << ','
            << format_double(c(i, j)) << '\n';
  }
}

void read_fullcov_csv(const std::string& path, std::vector<EstimateResult>& results) {
  auto in = open_in(path);
  expect_header(in, "traj_id,method,i,j,value", path);
  for (auto& r : results) {
    const Eigen::Index n = static_cast<Eigen::Index>(r.times.size()) * r.dim;
    r.full_cov = Eigen::MatrixXd::Zero(n, n);
  }
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_line(line);
    if (f.size() != 5) throw MissingInput("bad row in " + path);
    const std::size_t id = static_cast<std::size_t>(to_int(f[0], path));
    if (id >= results.size()) throw MissingInput("covariance for unknown trajectory in " + path);
    const Eigen::Index i = to_int(f[2], path);
    const Eigen::Index j = to_int(f[3], path);
    const double v = to_double(f[4], path);
    results[id].full_cov(i, j) = v;
    results[id].full_cov(j, i) = v;
  }
}

void write_metrics_csv(const std::string& path, const std::vector<MetricRow>& rows) {
  auto out = open_out(path);
  out << "traj_id,method,metric,value\n";
  for (const auto& r : rows)
    out << r.traj_id << ',' << r.method << ',' << r.metric << ',' << format_double(r.value) << '\n';
}

std::vector<MetricRow> read_metrics_csv(const std::string& path) {
  auto in = open_in(path);
  expect_header(in, "traj_id,method,metric,value", path);
  std::vector<MetricRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_line(line);
    if (f.size() != 4) throw MissingInput("bad row in " + path);
    rows.push_back({to_int(f[0], path), f[1], f[2], to_double(f[3], path)});
  }
  return rows;
}

void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows) {
  auto out = open_out(path);
  out << "method,metric,mean,median,q1,q3,w_lo,w_hi,n_outliers\n";
  for (const auto& r : rows)
    out << r.method << ',' << r.metric << ',' << format_double(r.mean) << ','
        << format_double(r.median) << ',' << format_double(r.q1) << ',' << format_double(r.q3)
        << ',' << format_double(r.w_lo) << ',' << format_double(r.w_hi) << ',' << r.n_outliers
        << '\n';
}

std::vector<SummaryRow> read_summary_csv(const std::string& path) {
  auto in = open_in(path);
  expect_header(in, "method,metric,mean,median,q1,q3,w_lo,w_hi,n_outliers", path);
  std::vector<SummaryRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_line(line);
    if (f.size() != 9) throw MissingInput("bad row in " + path);
    SummaryRow r;
    r.method = f[0];
    r.metric = f[1];
    r.mean = to_double(f[2], path);
    r.median = to_double(f[3], path);
    r.q1 = to_double(f[4], path);
    r.q3 = to_double(f[5], path);
    r.w_lo = to_double(f[6], path);
    r.w_hi = to_double(f[7], path);
    r.n_outliers = to_int(f[8], path);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace ctgp
