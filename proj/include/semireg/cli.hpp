#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "semireg/report.hpp"
#include "semireg/types.hpp"
#include "semireg/zoo.hpp"

namespace semireg {

struct ExperimentConfig {
  std::string command;

  // generator
  std::string zoo;
  ZooParams params;
  std::string matrix_path;
  int dim = 16;

  std::string poly = "[-1, 1]";

  // space
  double p = 2.0;
  std::string weights = "unit";  // "unit" or a file of whitespace-separated weights

  // t grid: decades * points_per_decade + 1 log-spaced points below t_max
  double t_max = 1.0;
  int decades = 3;
  int points_per_decade = 8;

  // sector
  std::vector<double> zeta{-1.0, 0.0};  // [re, im]
  double t0 = 1.0;
  std::vector<double> alpha_grid;  // empty: 12 points from 1.05 |theta| / t0 upwards

  // converse / extrapolation
  int N = 1;
  std::vector<double> K{0.0};
  std::vector<int> n_range{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};

  // rbound
  std::string mode = "exact";
  int mc_samples = 4096;
  int exact_cap = 14;
  int budget = 32;

  // cosine / zero-two / fattorini
  std::vector<int> dims{8, 16, 32, 64};
  double lambda = 0.0;  // 0: chosen from ||A||
  double omega = 0.5;
  int n_max = 8;
  double t = 0.8;

  // interpolation
  double p1 = 1.0;
  double p2 = kInf;

  // gaussian
  int ambient_dim = 1;
  int points = 64;
  double period = 8.0;
  double kernel_a = 1.0;
  std::string kernel_family = "potential";  // heat | potential
  int trials = 8;

  // maxreg
  double tau = 1.0;
  int n_time = 64;

  std::uint64_t seed = kDefaultSeed;

  std::string output;
  std::string format = "json";  // json | csv
};

/// Echo of every field, used in reports and accepted back by --config.
Json config_to_json(const ExperimentConfig& cfg);
/// Overwrites the fields present in `j`; unknown keys are rejected.
void apply_config_json(ExperimentConfig& cfg, const Json& j);

std::vector<double> t_grid_of(const ExperimentConfig& cfg);

/// Dispatches the command and writes `cfg.output` when set.
Report run(const ExperimentConfig& cfg);

/// Full command-line entry: parses argv, runs, prints. Returns the exit code
/// (0 success, 2 validation error, 3 numerical failure).
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace semireg
