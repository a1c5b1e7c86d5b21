#pragma once

// Config-driven Monte Carlo harness reproducing the simulation study at
// configurable scale, with CSV and SVG emission.

#include <cstdint>
#include <string>
#include <vector>

#include "maxscore/estimators.hpp"

namespace maxscore {

enum class Regime { Moderate, Sparse, Multinomial };
enum class PRule { N14, N12, N34, Fixed };

struct ExperimentConfig {
  Regime regime = Regime::Moderate;
  std::vector<long> n_list;
  PRule p_rule = PRule::N12;
  int fixed_p = 0;
  std::vector<int> s0_list;         // sparse regime
  std::vector<std::string> methods;
  int replicates = 1;
  std::uint64_t master_seed = 1;
  std::string output_csv;
  std::string output_svg;
  double rho = 0.5;                 // AR(1) correlation of the covariates
  int m = 3;                        // multinomial regime: number of alternatives
  long grid_points = 4096;
  std::vector<double> lambda_grid;  // default: 8 points log-spaced on [1e-4, 1]
  int cv_folds = 2;
  long svm_iterations = 2000;
  SrmConfig srm;
  int workers = 0;                  // 0: hardware/MAXSCORE_WORKERS
  bool emit_wall_time = false;      // wall_time breaks byte determinism; off by default

  void validate() const;  // throws naming the offending key
  int p_for(long n) const;
  static ExperimentConfig from_json(const std::string& text);
  static ExperimentConfig from_json_file(const std::string& path);
};

struct ExperimentRow {
  std::string method;
  long n = 0;
  int p = 0;
  int s0 = 0;        // 0 in dense regimes
  int replicate = 0;
  double scaled_error = 0.0;  // (n/p)^{1/3} * norm_diff
  double norm_diff = 0.0;
  double misclass_rate = 0.0; // on an independent holdout of the same size
  int type1 = -1;    // -1: not applicable
  int type2 = -1;
  double wall_time = 0.0;  // seconds; omitted from CSV unless emit_wall_time
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
};

ExperimentResult run_moderate_growth_study(const ExperimentConfig& cfg);
ExperimentResult run_sparse_study(const ExperimentConfig& cfg);
ExperimentResult run_multinomial_study(const ExperimentConfig& cfg);
ExperimentResult run_study(const ExperimentConfig& cfg);  // dispatch on regime

void emit_csv(const ExperimentResult& result, const std::string& path,
              bool include_wall_time = false);
ExperimentResult parse_csv(const std::string& path);

// Gaussian-kernel densities of the scaled error, one curve per
// (method, n or s0) group. group_key: "n" or "s0".
void emit_density_svg(const ExperimentResult& result, const std::string& group_key,
                      const std::string& path);

double silverman_bandwidth(std::vector<double> values);

}  // namespace maxscore
