#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ipr/slam/metrics.hpp"

namespace ipr::cli {

struct SlamRow {
  uint64_t seed = 0;
  std::string method;
  double trans_err_pct = 0.0;
  double rot_err_deg_per_m = 0.0;
  int failures = 0;
  double mdbf_m = 0.0;
  bool failed = false;  // run aborted; metric fields are NaN
};

struct SortingRow {
  uint64_t seed = 0;
  double area_ideal = 0.0;
  double area_predicted = 0.0;
  double area_random = 0.0;
};

struct SlamAggregate {
  double mean_trans_err_pct = 0.0;
  double mean_rot_err_deg_per_m = 0.0;
  double mean_failures = 0.0;
  double mean_mdbf_m = 0.0;
  int n_rows = 0;
};

struct SlamReport {
  std::vector<SlamRow> rows;          // |seeds| x |methods|
  std::vector<SortingRow> sorting;    // one per seed
  slam::SortingCurve example_curve;   // first seed, for plotting
  std::vector<std::string> run_log;

  std::string metrics_csv() const;   // seed,method,trans_err_pct,...
  std::string sorting_csv() const;
  std::string curve_csv() const;
  SlamAggregate aggregate(const std::string& method) const;
  void write(const std::string& dir) const;
};

struct DepthRow {
  uint64_t seed = 0;
  std::string split;  // "id" or "ood"
  std::string method;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double nll = 0.0;
  bool failed = false;
};

struct DepthAggregate {
  double mean_precision = 0.0;
  double mean_recall = 0.0;
  double mean_f1 = 0.0;
  double mean_nll = 0.0;
  int n_rows = 0;
};

struct DepthReport {
  std::vector<DepthRow> rows;  // |seeds| x |methods| x |splits|
  std::vector<std::string> run_log;

  std::string metrics_csv(const std::string& split) const;  // seed,method,precision,...
  DepthAggregate aggregate(const std::string& method, const std::string& split) const;
  void write(const std::string& dir) const;
};

// gnuplot script referencing the emitted curve CSVs
std::string gnuplot_script();

}  // namespace ipr::cli
