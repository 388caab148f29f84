#include "ipr/cli/report.hpp"

#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "ipr/core/io.hpp"

namespace ipr::cli {

std::string SlamReport::metrics_csv() const {
  std::ostringstream os;
  os << "seed,method,trans_err_pct,rot_err_deg_per_m,failures,mdbf_m\n";
  for (const auto& r : rows) {
    os << r.seed << ',' << r.method << ',' << fmt17(r.trans_err_pct) << ','
       << fmt17(r.rot_err_deg_per_m) << ',' << r.failures << ',' << fmt17(r.mdbf_m) << '\n';
  }
  return os.str();
}

std::string SlamReport::sorting_csv() const {
  std::ostringstream os;
  os << "seed,area_ideal,area_predicted,area_random\n";
  for (const auto& r : sorting) {
    os << r.seed << ',' << fmt17(r.area_ideal) << ',' << fmt17(r.area_predicted) << ','
       << fmt17(r.area_random) << '\n';
  }
  return os.str();
}

std::string SlamReport::curve_csv() const {
  std::ostringstream os;
  os << "top_fraction,ideal,predicted,random,random_std\n";
  for (size_t i = 0; i < example_curve.top_fraction.size(); ++i) {
    os << fmt17(example_curve.top_fraction[i]) << ',' << fmt17(example_curve.ideal[i]) << ','
       << fmt17(example_curve.predicted[i]) << ',' << fmt17(example_curve.random[i]) << ','
       << fmt17(example_curve.random_std[i]) << '\n';
  }
  return os.str();
}

SlamAggregate SlamReport::aggregate(const std::string& method) const {
  SlamAggregate a;
  for (const auto& r : rows) {
    if (r.method != method || r.failed) continue;
    a.mean_trans_err_pct += r.trans_err_pct;
    a.mean_rot_err_deg_per_m += r.rot_err_deg_per_m;
    a.mean_failures += r.failures;
    a.mean_mdbf_m += r.mdbf_m;
    ++a.n_rows;
  }
  if (a.n_rows > 0) {
    a.mean_trans_err_pct /= a.n_rows;
    a.mean_rot_err_deg_per_m /= a.n_rows;
    a.mean_failures /= a.n_rows;
    a.mean_mdbf_m /= a.n_rows;
  }
  return a;
}

void SlamReport::write(const std::string& dir) const {
  std::filesystem::create_directories(dir);
  write_file(dir + "/slam_metrics.csv", metrics_csv());
  write_file(dir + "/sorting_areas.csv", sorting_csv());
  write_file(dir + "/sorting_curve.csv", curve_csv());
  write_file(dir + "/plots.gp", gnuplot_script());
  std::ostringstream log;
  for (const auto& line : run_log) log << line << '\n';
  write_file(dir + "/run_log.txt", log.str());
}

std::string DepthReport::metrics_csv(const std::string& split) const {
  std::ostringstream os;
  os << "seed,method,precision,recall,f1,nll\n";
  for (const auto& r : rows) {
    if (r.split != split) continue;
    os << r.seed << ',' << r.method << ',' << fmt17(r.precision) << ',' << fmt17(r.recall)
       << ',' << fmt17(r.f1) << ',' << fmt17(r.nll) << '\n';
  }
  return os.str();
}

DepthAggregate DepthReport::aggregate(const std::string& method,
                                      const std::string& split) const {
  DepthAggregate a;
  for (const auto& r : rows) {
    if (r.method != method || r.split != split || r.failed) continue;
    a.mean_precision += r.precision;
    a.mean_recall += r.recall;
    a.mean_f1 += r.f1;
    a.mean_nll += r.nll;
    ++a.n_rows;
  }
  if (a.n_rows > 0) {
    a.mean_precision /= a.n_rows;
    a.mean_recall /= a.n_rows;
    a.mean_f1 /= a.n_rows;
    a.mean_nll /= a.n_rows;
  }
  return a;
}

void DepthReport::write(const std::string& dir) const {
  std::filesystem::create_directories(dir);
  write_file(dir + "/depth_metrics_id.csv", metrics_csv("id"));
  write_file(dir + "/depth_metrics_ood.csv", metrics_csv("ood"));
  std::ostringstream log;
  for (const auto& line : run_log) log << line << '\n';
  write_file(dir + "/run_log.txt", log.str());
}

std::string gnuplot_script() {
  return R"gp(set datafile separator ","
set key left top
set xlabel "top fraction of features"
set ylabel "mean reprojection error (px)"
set terminal svg size 720,480
set output "sorting_curve.svg"
plot "sorting_curve.csv" using 1:2 skip 1 with lines title "ideal", \
     "sorting_curve.csv" using 1:3 skip 1 with lines title "introspection", \
     "sorting_curve.csv" using 1:4 skip 1 with lines title "random"
)gp";
}

}  // namespace ipr::cli
