// Command line front end for the maxscore shared library. Talks to the
// library exclusively through the C API in maxscore/maxscore.h.
//
// Exit codes: 0 success, 1 configuration/usage error, 2 verification failure.

#include <cinttypes>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "maxscore/maxscore.h"

namespace {

int report_error(const char* what, ms_status status) {
  std::fprintf(stderr, "error: %s: %s\n", what, ms_last_error());
  return status == MS_ERR_CHECK_FAILED ? 2 : 1;
}

int cmd_estimate(const std::string& data_path, const std::string& method, long grid_points,
                 double lambda, double margin_cost, int folds, uint64_t seed) {
  ms_dataset* data = nullptr;
  ms_status st = ms_dataset_read_csv(data_path.c_str(), &data);
  if (st != MS_OK) return report_error("reading dataset", st);

  ms_estimate_options opts;
  ms_estimate_options_init(&opts);
  opts.grid_points = grid_points;
  opts.lambda = lambda;
  opts.margin_cost = margin_cost;
  opts.cv_folds = folds;
  opts.seed = seed;

  ms_estimate* est = nullptr;
  st = ms_estimate_run(data, method.c_str(), &opts, &est);
  if (st != MS_OK) {
    ms_dataset_free(data);
    return report_error("estimate", st);
  }

  std::printf("method=%s n=%ld p=%ld score=%.17g evals=%ld degenerate=%d\n",
              ms_estimate_method(est), ms_dataset_rows(data), ms_dataset_cols(data),
              ms_estimate_score(est), ms_estimate_evaluations(est), ms_estimate_degenerate(est));
  const long dim = ms_estimate_dim(est);
  std::vector<double> beta(dim);
  if (ms_estimate_coefficients(est, beta.data(), dim) == MS_OK) {
    std::printf("beta=");
    for (long i = 0; i < dim; ++i) std::printf(i ? ",%.17g" : "%.17g", beta[i]);
    std::printf("\n");
  }
  const long ssize = ms_estimate_support_size(est);
  if (ssize > 0) {
    std::vector<long> support(ssize);
    ms_estimate_support(est, support.data(), ssize);
    std::printf("support=");
    for (long i = 0; i < ssize; ++i) std::printf(i ? ",%ld" : "%ld", support[i] + 1);
    std::printf("\n");
  }
  ms_estimate_free(est);
  ms_dataset_free(data);
  return 0;
}

int cmd_srm(const std::string& data_path, double K, double Cn, long max_sparsity, long budget,
            bool greedy, uint64_t seed) {
  ms_dataset* data = nullptr;
  ms_status st = ms_dataset_read_csv(data_path.c_str(), &data);
  if (st != MS_OK) return report_error("reading dataset", st);

  ms_estimate* est = nullptr;
  st = ms_srm_run(data, K, Cn, max_sparsity, budget, greedy ? 0 : 1, seed, &est);
  if (st != MS_OK) {
    ms_dataset_free(data);
    return report_error("srm", st);
  }
  std::printf("method=srm n=%ld p=%ld score=%.17g sparsity=%d\n", ms_dataset_rows(data),
              ms_dataset_cols(data), ms_estimate_score(est), ms_estimate_selected_sparsity(est));
  const long ssize = ms_estimate_support_size(est);
  std::vector<long> support(ssize);
  if (ssize > 0) ms_estimate_support(est, support.data(), ssize);
  std::printf("support=");
  for (long i = 0; i < ssize; ++i) std::printf(i ? ",%ld" : "%ld", support[i] + 1);
  std::printf("\n");
  ms_estimate_free(est);
  ms_dataset_free(data);
  return 0;
}

void print_row(const char* check, const char* params, double estimate, double bound,
               double stderr_, int pass, void*) {
  std::printf("%-22s %-32s estimate=%-12.6g bound=%-12.6g stderr=%-10.3g %s\n", check, params,
              estimate, bound, stderr_, pass ? "PASS" : "FAIL");
}

int cmd_verify(const std::string& check, bool all, uint64_t seed) {
  if (!all && check.empty()) {
    std::fprintf(stderr, "error: verify requires --check <name> or --all\n");
    return 1;
  }
  int failures = 0;
  const ms_status st =
      ms_verify_run(all ? nullptr : check.c_str(), seed, print_row, nullptr, &failures);
  if (st == MS_OK) {
    std::printf("all checks passed\n");
    return 0;
  }
  if (st == MS_ERR_CHECK_FAILED) {
    std::fprintf(stderr, "%d check row(s) failed\n", failures);
    return 2;
  }
  return report_error("verify", st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maximum score estimation for discrete choice models"};
  app.require_subcommand(1);

  auto* simulate = app.add_subcommand("simulate", "run a Monte Carlo study from a config file");
  std::string config_path;
  simulate->add_option("--config", config_path, "JSON experiment config")->required();

  auto* estimate = app.add_subcommand("estimate", "fit one method to a dataset CSV");
  std::string data_path, method = "smoothed";
  long grid_points = 10000;
  double lambda = -1.0, margin_cost = 1.0;
  int folds = 2;
  uint64_t seed = 1;
  estimate->add_option("--data", data_path, "CSV with header x1,...,xp,y")->required();
  estimate->add_option("--method", method,
                       "exact-2d|grid|smoothed|logistic|logistic-l1|svm|svm-l1");
  estimate->add_option("--grid-points", grid_points, "grid method draw count");
  estimate->add_option("--lambda", lambda, "l1 penalty (<0: cross-validated)");
  estimate->add_option("--margin-cost", margin_cost, "SVM hinge weight");
  estimate->add_option("--folds", folds, "CV folds");
  estimate->add_option("--seed", seed, "master seed");

  auto* srm = app.add_subcommand("srm", "SRM penalized subset selection");
  std::string srm_data;
  double srm_K = 1.0, srm_Cn = 1.0;
  long srm_max_sparsity = 0, srm_budget = 20000;
  bool srm_greedy = false;
  uint64_t srm_seed = 1;
  srm->add_option("--data", srm_data, "CSV with header x1,...,xp,y")->required();
  srm->add_option("--K", srm_K, "penalty constant");
  srm->add_option("--Cn", srm_Cn, "transition constant in (0,1]");
  srm->add_option("--max-sparsity", srm_max_sparsity, "0: floor(n/(4 log p))");
  srm->add_option("--budget", srm_budget, "per-level enumeration budget");
  srm->add_flag("--greedy", srm_greedy, "force greedy forward-swap search");
  srm->add_option("--seed", srm_seed, "master seed");

  auto* verify = app.add_subcommand("verify", "run the analytic verification suite");
  std::string check_name;
  bool verify_all = false;
  uint64_t verify_seed = 20240501;
  verify->add_option("--check", check_name, "single check name");
  verify->add_flag("--all", verify_all, "run every check");
  verify->add_option("--seed", verify_seed, "master seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 1;
  }

  if (simulate->parsed()) {
    const ms_status st = ms_simulate_run(config_path.c_str());
    if (st != MS_OK) return report_error("simulate", st);
    std::printf("simulation complete\n");
    return 0;
  }
  if (estimate->parsed())
    return cmd_estimate(data_path, method, grid_points, lambda, margin_cost, folds, seed);
  if (srm->parsed())
    return cmd_srm(srm_data, srm_K, srm_Cn, srm_max_sparsity, srm_budget, srm_greedy, srm_seed);
  if (verify->parsed()) return cmd_verify(check_name, verify_all, verify_seed);
  return 1;
}
