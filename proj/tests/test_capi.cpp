#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "maxscore/maxscore.h"

namespace {

const char* kDgpJson = R"({
  "p": 3,
  "beta0": [0.6, 0.8, 0.0],
  "covariate_law": "isotropic-gaussian",
  "error_law": "standard-gaussian"
})";

struct RowCollector {
  int rows = 0;
  int failures = 0;
  static void cb(const char*, const char*, double, double, double, int pass, void* user) {
    auto* self = static_cast<RowCollector*>(user);
    ++self->rows;
    if (!pass) ++self->failures;
  }
};

}  // namespace

TEST_CASE("version and error strings") {
  CHECK(std::strlen(ms_version()) > 0);
  CHECK(ms_last_error() != nullptr);
}

TEST_CASE("dataset lifecycle via the C surface") {
  ms_dataset* data = nullptr;
  REQUIRE(ms_dataset_generate(kDgpJson, 200, 42, 0, &data) == MS_OK);
  CHECK(ms_dataset_rows(data) == 200);
  CHECK(ms_dataset_cols(data) == 3);

  const char* path = "capi_data.csv";
  REQUIRE(ms_dataset_write_csv(data, path) == MS_OK);
  ms_dataset* back = nullptr;
  REQUIRE(ms_dataset_read_csv(path, &back) == MS_OK);
  CHECK(ms_dataset_rows(back) == 200);
  ms_dataset_free(back);
  ms_dataset_free(data);
  std::filesystem::remove(path);
}

TEST_CASE("bad inputs surface as status codes with messages") {
  ms_dataset* data = nullptr;
  CHECK(ms_dataset_read_csv("no_such_file.csv", &data) == MS_ERR_IO);
  CHECK(std::strlen(ms_last_error()) > 0);
  CHECK(ms_dataset_generate("{\"p\": 2}", 10, 1, 0, &data) == MS_ERR_INVALID_ARGUMENT);
  CHECK(std::string(ms_last_error()).find("beta0") != std::string::npos);
  CHECK(ms_dataset_generate(nullptr, 10, 1, 0, &data) == MS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("estimation through the C API") {
  ms_dataset* data = nullptr;
  REQUIRE(ms_dataset_generate(kDgpJson, 300, 7, 0, &data) == MS_OK);

  SUBCASE("grid method") {
    ms_estimate_options opts;
    ms_estimate_options_init(&opts);
    opts.grid_points = 500;
    ms_estimate* est = nullptr;
    REQUIRE(ms_estimate_run(data, "grid", &opts, &est) == MS_OK);
    CHECK(std::string(ms_estimate_method(est)) == "grid");
    CHECK(ms_estimate_score(est) >= -1.0);
    CHECK(ms_estimate_score(est) <= 1.0);
    CHECK(ms_estimate_dim(est) == 3);
    std::vector<double> beta(3);
    REQUIRE(ms_estimate_coefficients(est, beta.data(), 3) == MS_OK);
    const double norm2 = beta[0] * beta[0] + beta[1] * beta[1] + beta[2] * beta[2];
    CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(ms_estimate_coefficients(est, beta.data(), 2) == MS_ERR_INVALID_ARGUMENT);
    ms_estimate_free(est);
  }

  SUBCASE("unknown method rejected") {
    ms_estimate* est = nullptr;
    CHECK(ms_estimate_run(data, "warp-drive", nullptr, &est) == MS_ERR_INVALID_ARGUMENT);
  }

  SUBCASE("exact-2d requires p=2") {
    ms_estimate* est = nullptr;
    CHECK(ms_estimate_run(data, "exact-2d", nullptr, &est) == MS_ERR_INVALID_ARGUMENT);
  }

  SUBCASE("l1 logistic exposes a support") {
    ms_estimate_options opts;
    ms_estimate_options_init(&opts);
    opts.lambda = 0.01;
    ms_estimate* est = nullptr;
    REQUIRE(ms_estimate_run(data, "logistic-l1", &opts, &est) == MS_OK);
    const long size = ms_estimate_support_size(est);
    CHECK(size >= 1);
    std::vector<long> support(size);
    REQUIRE(ms_estimate_support(est, support.data(), size) == MS_OK);
    for (long i = 0; i < size; ++i) {
      CHECK(support[i] >= 0);
      CHECK(support[i] < 3);
    }
    ms_estimate_free(est);
  }

  ms_dataset_free(data);
}

TEST_CASE("SRM via the C API") {
  ms_dataset* data = nullptr;
  const char* sparse_json = R"({
    "p": 6,
    "beta0": [0.0, 1.0, 0.0, 0.0, 0.0, 0.0],
    "error_law": "noiseless"
  })";
  REQUIRE(ms_dataset_generate(sparse_json, 150, 9, 0, &data) == MS_OK);
  ms_estimate* est = nullptr;
  REQUIRE(ms_srm_run(data, 1.0, 1.0, 3, 20000, 1, 11, &est) == MS_OK);
  CHECK(ms_estimate_selected_sparsity(est) == 1);
  CHECK(ms_estimate_score(est) == 1.0);
  long support = -1;
  REQUIRE(ms_estimate_support(est, &support, 1) == MS_OK);
  CHECK(support == 1);
  ms_estimate_free(est);
  ms_dataset_free(data);
}

TEST_CASE("verify through the C API") {
  SUBCASE("single passing check") {
    RowCollector rows;
    int failures = -1;
    CHECK(ms_verify_run("kl-bound", 20240501, RowCollector::cb, &rows, &failures) == MS_OK);
    CHECK(failures == 0);
    CHECK(rows.rows >= 1);
    CHECK(rows.failures == 0);
  }

  SUBCASE("unknown check name") {
    CHECK(ms_verify_run("not-a-check", 1, nullptr, nullptr, nullptr) ==
          MS_ERR_INVALID_ARGUMENT);
  }

  SUBCASE("check list is newline joined") {
    const long needed = ms_verify_list(nullptr, 0);
    REQUIRE(needed > 1);
    std::vector<char> buf(needed);
    CHECK(ms_verify_list(buf.data(), needed) == needed);
    const std::string names(buf.data());
    CHECK(names.find("kl-bound") != std::string::npos);
    CHECK(names.find('\n') != std::string::npos);
  }
}

TEST_CASE("simulate through the C API") {
  const char* cfg_path = "capi_sim.json";
  const char* csv_path = "capi_sim.csv";
  {
    std::ofstream out(cfg_path);
    out << R"({
      "schema_version": 1,
      "regime": "moderate",
      "n_list": [120],
      "p_rule": "n^{1/4}",
      "methods": ["grid"],
      "grid_points": 64,
      "replicates": 2,
      "master_seed": 5,
      "output_csv": "capi_sim.csv"
    })";
  }
  CHECK(ms_simulate_run(cfg_path) == MS_OK);
  CHECK(std::filesystem::exists(csv_path));
  CHECK(ms_simulate_run("missing_config.json") == MS_ERR_INVALID_ARGUMENT);
  std::filesystem::remove(cfg_path);
  std::filesystem::remove(csv_path);
}
