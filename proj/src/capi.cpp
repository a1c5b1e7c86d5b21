#include "maxscore/maxscore.h"

#include <cstring>
#include <string>

#include "maxscore/experiments.hpp"
#include "maxscore/theory.hpp"

namespace {

thread_local std::string g_last_error;

ms_status fail(ms_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <typename Fn>
ms_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    return fail(MS_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::ios_base::failure& e) {
    return fail(MS_ERR_IO, e.what());
  } catch (const std::runtime_error& e) {
    const std::string what = e.what();
    if (what.find("cannot open") != std::string::npos) return fail(MS_ERR_IO, what);
    return fail(MS_ERR_NUMERIC, what);
  } catch (const std::exception& e) {
    return fail(MS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(MS_ERR_INTERNAL, "unknown error");
  }
}

}  // namespace

struct ms_dataset {
  maxscore::BinaryDataset data;
};

struct ms_estimate {
  maxscore::EstimateResult result;
};

extern "C" {

const char* ms_version(void) { return "1.0.0"; }

const char* ms_last_error(void) { return g_last_error.c_str(); }

ms_status ms_dataset_read_csv(const char* path, ms_dataset** out) {
  if (!path || !out) return fail(MS_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto* handle = new ms_dataset{maxscore::read_binary_csv(path)};
    *out = handle;
    return MS_OK;
  });
}

ms_status ms_dataset_write_csv(const ms_dataset* data, const char* path) {
  if (!data || !path) return fail(MS_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    maxscore::write_binary_csv(data->data, path);
    return MS_OK;
  });
}

ms_status ms_dataset_generate(const char* dgp_json, long n, uint64_t master_seed,
                              uint64_t stream_id, ms_dataset** out) {
  if (!dgp_json || !out) return fail(MS_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const maxscore::DgpSpec spec = maxscore::DgpSpec::from_json(dgp_json);
    auto* handle = new ms_dataset{
        maxscore::generate_binary_dataset(spec, n, {master_seed, stream_id})};
    *out = handle;
    return MS_OK;
  });
}

long ms_dataset_rows(const ms_dataset* data) { return data ? data->data.n() : 0; }
long ms_dataset_cols(const ms_dataset* data) { return data ? data->data.p() : 0; }
void ms_dataset_free(ms_dataset* data) { delete data; }

void ms_estimate_options_init(ms_estimate_options* opts) {
  if (!opts) return;
  opts->grid_points = 10000;
  opts->lambda = -1.0;
  opts->margin_cost = 1.0;
  opts->cv_folds = 2;
  opts->seed = 1;
}

ms_status ms_estimate_run(const ms_dataset* data, const char* method,
                          const ms_estimate_options* opts, ms_estimate** out) {
  if (!data || !method || !out) return fail(MS_ERR_INVALID_ARGUMENT, "null argument");
  ms_estimate_options defaults;
  ms_estimate_options_init(&defaults);
  const ms_estimate_options& o = opts ? *opts : defaults;
  return guarded([&] {
    using namespace maxscore;
    const Method m = method_from_name(method);
    const SeedSpec seed{o.seed, 0};
    EstimateResult result;
    switch (m) {
      case Method::Exact2d:
        result = exact_max_score_2d(data->data);
        break;
      case Method::Grid:
        result = grid_estimator(data->data, o.grid_points, seed);
        break;
      case Method::SmoothedAscent: {
        const EstimateResult init = logistic_fit(data->data);
        result = smoothed_gradient_ascent(data->data, init.beta_hat);
        break;
      }
      case Method::Logistic:
      case Method::Svm: {
        ConvexFitConfig cfg;
        cfg.margin_cost = o.margin_cost;
        result = m == Method::Svm ? svm_fit(data->data, cfg) : logistic_fit(data->data, cfg);
        break;
      }
      case Method::LogisticL1:
      case Method::SvmL1: {
        ConvexFitConfig cfg;
        cfg.margin_cost = o.margin_cost;
        if (o.lambda >= 0.0) {
          cfg.lambda = o.lambda;
        } else {
          std::vector<double> grid;
          for (int i = 0; i < 8; ++i) grid.push_back(std::pow(10.0, -4.0 + 4.0 * i / 7.0));
          cfg.lambda = cross_validate(data->data, m, grid, o.cv_folds, seed, o.margin_cost);
        }
        result = m == Method::SvmL1 ? svm_fit(data->data, cfg) : logistic_fit(data->data, cfg);
        break;
      }
      case Method::Srm:
        throw std::invalid_argument("use ms_srm_run for the srm method");
    }
    *out = new ms_estimate{std::move(result)};
    return MS_OK;
  });
}

ms_status ms_srm_run(const ms_dataset* data, double K, double Cn, long max_sparsity,
                     long enumeration_budget, int exact_enumeration, uint64_t seed,
                     ms_estimate** out) {
  if (!data || !out) return fail(MS_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    maxscore::SrmConfig cfg;
    cfg.K = K;
    cfg.C_n = Cn;
    cfg.max_sparsity = static_cast<int>(max_sparsity);
    if (enumeration_budget > 0) cfg.enumeration_budget = enumeration_budget;
    cfg.inner_solver = exact_enumeration ? maxscore::SrmInnerSolver::ExactEnumeration
                                         : maxscore::SrmInnerSolver::GreedyForwardSwap;
    cfg.seed = {seed, 0};
    *out = new ms_estimate{maxscore::srm_select(data->data, cfg)};
    return MS_OK;
  });
}

double ms_estimate_score(const ms_estimate* est) { return est ? est->result.achieved_score : 0.0; }

long ms_estimate_dim(const ms_estimate* est) { return est ? est->result.beta_hat.dim() : 0; }

ms_status ms_estimate_coefficients(const ms_estimate* est, double* buf, long len) {
  if (!est || !buf) return fail(MS_ERR_INVALID_ARGUMENT, "null argument");
  const long dim = est->result.beta_hat.dim();
  if (len < dim) return fail(MS_ERR_INVALID_ARGUMENT, "buffer too small");
  std::memcpy(buf, est->result.beta_hat.coords().data(), sizeof(double) * dim);
  return MS_OK;
}

long ms_estimate_support_size(const ms_estimate* est) {
  return est ? static_cast<long>(est->result.support.size()) : 0;
}

ms_status ms_estimate_support(const ms_estimate* est, long* buf, long len) {
  if (!est || !buf) return fail(MS_ERR_INVALID_ARGUMENT, "null argument");
  const long size = static_cast<long>(est->result.support.size());
  if (len < size) return fail(MS_ERR_INVALID_ARGUMENT, "buffer too small");
  for (long i = 0; i < size; ++i) buf[i] = est->result.support[i];
  return MS_OK;
}

long ms_estimate_evaluations(const ms_estimate* est) {
  return est ? est->result.evaluations : 0;
}

int ms_estimate_degenerate(const ms_estimate* est) {
  return est && est->result.degenerate ? 1 : 0;
}

int ms_estimate_selected_sparsity(const ms_estimate* est) {
  return est ? est->result.selected_sparsity : 0;
}

const char* ms_estimate_method(const ms_estimate* est) {
  static thread_local std::string name;
  if (!est) return "";
  name = maxscore::method_name(est->result.method);
  return name.c_str();
}

void ms_estimate_free(ms_estimate* est) { delete est; }

ms_status ms_verify_run(const char* check_name, uint64_t master_seed, ms_report_row_fn row_cb,
                        void* user, int* failures_out) {
  return guarded([&] {
    const std::vector<maxscore::CheckRow> rows =
        check_name ? maxscore::run_check(check_name, master_seed)
                   : maxscore::run_all_checks(master_seed);
    int failures = 0;
    for (const auto& row : rows) {
      if (!row.pass) ++failures;
      if (row_cb)
        row_cb(row.check.c_str(), row.params.c_str(), row.estimate, row.bound, row.stderr_,
               row.pass ? 1 : 0, user);
    }
    if (failures_out) *failures_out = failures;
    if (failures > 0) return fail(MS_ERR_CHECK_FAILED, std::to_string(failures) + " check row(s) failed");
    return MS_OK;
  });
}

long ms_verify_list(char* buf, long len) {
  std::string joined;
  for (const auto& name : maxscore::list_checks()) {
    if (!joined.empty()) joined += "\n";
    joined += name;
  }
  const long needed = static_cast<long>(joined.size()) + 1;
  if (buf && len >= needed) std::memcpy(buf, joined.c_str(), needed);
  return needed;
}

ms_status ms_simulate_run(const char* config_path) {
  if (!config_path) return fail(MS_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const maxscore::ExperimentConfig cfg = maxscore::ExperimentConfig::from_json_file(config_path);
    const maxscore::ExperimentResult result = maxscore::run_study(cfg);
    if (!cfg.output_csv.empty()) maxscore::emit_csv(result, cfg.output_csv, cfg.emit_wall_time);
    if (!cfg.output_svg.empty())
      maxscore::emit_density_svg(result, cfg.regime == maxscore::Regime::Sparse ? "s0" : "n",
                                 cfg.output_svg);
    return MS_OK;
  });
}

}  // extern "C"
