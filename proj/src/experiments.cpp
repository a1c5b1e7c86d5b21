#include "maxscore/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace maxscore {

namespace {

constexpr std::uint64_t kSaltBeta0 = 0x70;
constexpr std::uint64_t kSaltHoldout = 0x71;
constexpr std::uint64_t kSaltMethodSeed = 0x72;

std::vector<double> default_lambda_grid() {
  // 8 points log-spaced on [1e-4, 1]
  std::vector<double> grid;
  for (int i = 0; i < 8; ++i) grid.push_back(std::pow(10.0, -4.0 + 4.0 * i / 7.0));
  return grid;
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("MAXSCORE_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Deterministic parallel map: task t writes slot t, output order is fixed
// regardless of the worker count.
template <typename Fn>
std::vector<std::vector<ExperimentRow>> parallel_tasks(long count, int workers, Fn&& fn) {
  std::vector<std::vector<ExperimentRow>> out(count);
  if (workers <= 1 || count <= 1) {
    for (long t = 0; t < count; ++t) out[t] = fn(t);
    return out;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int w = 0; w < std::min<long>(workers, count); ++w)
    pool.emplace_back([&] {
      for (;;) {
        const long t = next.fetch_add(1);
        if (t >= count) return;
        try {
          out[t] = fn(t);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return out;
}

void sort_rows(std::vector<ExperimentRow>& rows) {
  std::sort(rows.begin(), rows.end(), [](const ExperimentRow& a, const ExperimentRow& b) {
    return std::tie(a.method, a.n, a.s0, a.replicate) < std::tie(b.method, b.n, b.s0, b.replicate);
  });
}

double binary_misclass(const BinaryDataset& holdout, const UnitVector& beta) {
  return empirical_risk(holdout, beta);
}

EstimateResult fit_method(const std::string& method, const BinaryDataset& data,
                          const ExperimentConfig& cfg, const SeedSpec& seed) {
  const Method m = method_from_name(method);
  switch (m) {
    case Method::Exact2d:
      return exact_max_score_2d(data);
    case Method::Grid:
      return grid_estimator(data, cfg.grid_points, seed);
    case Method::SmoothedAscent: {
      const EstimateResult init = logistic_fit(data);
      return smoothed_gradient_ascent(data, init.beta_hat);
    }
    case Method::Logistic:
      return logistic_fit(data);
    case Method::Svm: {
      ConvexFitConfig fc;
      fc.max_iterations = static_cast<int>(cfg.svm_iterations);
      return svm_fit(data, fc);
    }
    case Method::LogisticL1:
    case Method::SvmL1: {
      const std::vector<double> grid =
          cfg.lambda_grid.empty() ? default_lambda_grid() : cfg.lambda_grid;
      const double lambda = cross_validate(data, m, grid, cfg.cv_folds, seed);
      ConvexFitConfig fc;
      fc.lambda = lambda;
      if (m == Method::SvmL1) fc.max_iterations = static_cast<int>(cfg.svm_iterations);
      return m == Method::SvmL1 ? svm_fit(data, fc) : logistic_fit(data, fc);
    }
    case Method::Srm: {
      SrmConfig sc = cfg.srm;
      sc.seed = seed;
      return srm_select(data, sc);
    }
  }
  throw std::invalid_argument("fit_method: unhandled method '" + method + "'");
}

}  // namespace

void ExperimentConfig::validate() const {
  if (replicates < 1) throw std::invalid_argument("config.replicates: must be >= 1");
  if (n_list.empty()) throw std::invalid_argument("config.n_list: must be non-empty");
  for (long n : n_list)
    if (n < 10) throw std::invalid_argument("config.n_list: all n must be >= 10");
  if (methods.empty()) throw std::invalid_argument("config.methods: must be non-empty");
  for (const auto& name : methods) method_from_name(name);  // throws on unknown
  for (long n : n_list)
    if (p_for(n) < 2) throw std::invalid_argument("config.p_rule: must yield p >= 2");
  if (!(std::abs(rho) < 1.0)) throw std::invalid_argument("config.rho: must satisfy |rho| < 1");
  if (regime == Regime::Sparse) {
    if (s0_list.empty()) throw std::invalid_argument("config.s0_list: required for sparse regime");
    for (long n : n_list)
      for (int s0 : s0_list)
        if (s0 < 1 || s0 > p_for(n))
          throw std::invalid_argument("config.s0_list: need 1 <= s0 <= p");
  }
  if (regime == Regime::Multinomial && m < 2)
    throw std::invalid_argument("config.m: must be >= 2");
  if (cv_folds < 2) throw std::invalid_argument("config.cv_folds: must be >= 2");
  if (grid_points < 1) throw std::invalid_argument("config.grid_points: must be >= 1");
}

int ExperimentConfig::p_for(long n) const {
  switch (p_rule) {
    case PRule::N14: return static_cast<int>(std::floor(std::pow(n, 0.25)));
    case PRule::N12: return static_cast<int>(std::floor(std::sqrt(static_cast<double>(n))));
    case PRule::N34: return static_cast<int>(std::floor(std::pow(n, 0.75)));
    case PRule::Fixed: return fixed_p;
  }
  return 0;
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.contains("schema_version"))
    throw std::invalid_argument("config.schema_version: missing");
  if (j.at("schema_version").get<int>() != 1)
    throw std::invalid_argument("config.schema_version: unsupported (expected 1)");

  ExperimentConfig cfg;
  const std::string regime = j.value("regime", "");
  if (regime == "moderate")
    cfg.regime = Regime::Moderate;
  else if (regime == "sparse")
    cfg.regime = Regime::Sparse;
  else if (regime == "multinomial")
    cfg.regime = Regime::Multinomial;
  else
    throw std::invalid_argument("config.regime: must be moderate|sparse|multinomial");

  if (!j.contains("n_list")) throw std::invalid_argument("config.n_list: missing");
  cfg.n_list = j.at("n_list").get<std::vector<long>>();

  const std::string rule = j.value("p_rule", "n^{1/2}");
  if (rule == "n^{1/4}")
    cfg.p_rule = PRule::N14;
  else if (rule == "n^{1/2}")
    cfg.p_rule = PRule::N12;
  else if (rule == "n^{3/4}")
    cfg.p_rule = PRule::N34;
  else if (rule == "fixed") {
    cfg.p_rule = PRule::Fixed;
    if (!j.contains("fixed_p"))
      throw std::invalid_argument("config.fixed_p: required when p_rule is fixed");
    cfg.fixed_p = j.at("fixed_p").get<int>();
  } else {
    throw std::invalid_argument("config.p_rule: must be n^{1/4}|n^{1/2}|n^{3/4}|fixed");
  }

  cfg.s0_list = j.value("s0_list", std::vector<int>{});
  if (!j.contains("methods")) throw std::invalid_argument("config.methods: missing");
  cfg.methods = j.at("methods").get<std::vector<std::string>>();
  cfg.replicates = j.value("replicates", 1);
  if (!j.contains("master_seed")) throw std::invalid_argument("config.master_seed: missing");
  cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
  cfg.output_csv = j.value("output_csv", "");
  cfg.output_svg = j.value("output_svg", "");
  cfg.rho = j.value("rho", 0.5);
  cfg.m = j.value("m", 3);
  cfg.grid_points = j.value("grid_points", 4096L);
  cfg.lambda_grid = j.value("lambda_grid", std::vector<double>{});
  cfg.cv_folds = j.value("cv_folds", 2);
  cfg.svm_iterations = j.value("svm_iterations", 2000L);
  cfg.workers = j.value("workers", 0);
  cfg.emit_wall_time = j.value("emit_wall_time", false);
  if (j.contains("srm")) {
    const auto& s = j.at("srm");
    cfg.srm.K = s.value("K", 1.0);
    cfg.srm.C_n = s.value("Cn", 1.0);
    cfg.srm.max_sparsity = s.value("max_sparsity", 0);
    cfg.srm.enumeration_budget = s.value("enumeration_budget", 20000L);
    const std::string solver = s.value("inner_solver", "exact-enumeration");
    if (solver == "exact-enumeration")
      cfg.srm.inner_solver = SrmInnerSolver::ExactEnumeration;
    else if (solver == "greedy-forward-swap")
      cfg.srm.inner_solver = SrmInnerSolver::GreedyForwardSwap;
    else
      throw std::invalid_argument(
          "config.srm.inner_solver: must be exact-enumeration|greedy-forward-swap");
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

namespace {

ExperimentResult run_binary_study(const ExperimentConfig& cfg) {
  cfg.validate();
  const int workers = resolve_workers(cfg.workers);

  struct Task {
    std::size_t n_index;
    int replicate;
  };
  std::vector<Task> tasks;
  for (std::size_t ni = 0; ni < cfg.n_list.size(); ++ni)
    for (int r = 0; r < cfg.replicates; ++r) tasks.push_back({ni, r});

  std::vector<std::vector<std::vector<int>>> supports;   // [n_index][s0_index]
  std::vector<std::vector<UnitVector>> beta0s;            // [n_index][s0_index or 0]
  for (std::size_t ni = 0; ni < cfg.n_list.size(); ++ni) {
    const int p = cfg.p_for(cfg.n_list[ni]);
    std::vector<UnitVector> per_n;
    std::vector<std::vector<int>> per_n_support;
    if (cfg.regime == Regime::Sparse) {
      for (std::size_t si = 0; si < cfg.s0_list.size(); ++si) {
        Rng rng({cfg.master_seed, (ni << 8) + si}, kSaltBeta0);
        std::vector<int> support;
        per_n.push_back(make_sparse_beta0(p, cfg.s0_list[si], rng, &support));
        per_n_support.push_back(std::move(support));
      }
    } else {
      Rng rng({cfg.master_seed, ni}, kSaltBeta0);
      per_n.push_back(make_moderate_beta0(p, rng));
    }
    beta0s.push_back(std::move(per_n));
    supports.push_back(std::move(per_n_support));
  }

  const auto run_task = [&](long t) {
    const Task task = tasks[t];
    const long n = cfg.n_list[task.n_index];
    const int p = cfg.p_for(n);
    const std::size_t s0_count = cfg.regime == Regime::Sparse ? cfg.s0_list.size() : 1;
    std::vector<ExperimentRow> rows;
    for (std::size_t si = 0; si < s0_count; ++si) {
      const UnitVector& beta0 = beta0s[task.n_index][si];
      DgpSpec spec;
      spec.p = p;
      spec.beta0 = beta0;
      spec.covariate_law = CovariateLaw::Ar1Gaussian;
      spec.rho = cfg.rho;
      spec.error_law = ErrorLaw::HeteroscedasticGaussian;

      const SeedSpec data_seed{cfg.master_seed,
                               ((task.n_index * 64 + si) << 24) + static_cast<std::uint64_t>(task.replicate)};
      const BinaryDataset data = generate_binary_dataset(spec, n, data_seed);
      const BinaryDataset holdout =
          generate_binary_dataset(spec, n, {seed_key(data_seed, kSaltHoldout), 0});

      for (const auto& method : cfg.methods) {
        const auto start = std::chrono::steady_clock::now();
        const EstimateResult fit =
            fit_method(method, data, cfg, {seed_key(data_seed, kSaltMethodSeed), 0});
        const auto stop = std::chrono::steady_clock::now();

        ExperimentRow row;
        row.method = method;
        row.n = n;
        row.p = p;
        row.s0 = cfg.regime == Regime::Sparse ? cfg.s0_list[si] : 0;
        row.replicate = task.replicate;
        row.norm_diff = (fit.beta_hat.coords() - beta0.coords()).norm();
        row.scaled_error = std::cbrt(static_cast<double>(n) / p) * row.norm_diff;
        row.misclass_rate = binary_misclass(holdout, fit.beta_hat);
        if (cfg.regime == Regime::Sparse) {
          const auto [t1, t2] = support_metrics(supports[task.n_index][si], fit.support);
          row.type1 = t1;
          row.type2 = t2;
        }
        row.wall_time = std::chrono::duration<double>(stop - start).count();
        rows.push_back(std::move(row));
      }
    }
    return rows;
  };

  const auto chunks = parallel_tasks(static_cast<long>(tasks.size()), workers, run_task);
  ExperimentResult result;
  for (const auto& chunk : chunks) result.rows.insert(result.rows.end(), chunk.begin(), chunk.end());
  sort_rows(result.rows);
  return result;
}

}  // namespace

ExperimentResult run_moderate_growth_study(const ExperimentConfig& cfg) {
  if (cfg.regime != Regime::Moderate)
    throw std::invalid_argument("run_moderate_growth_study: config.regime must be moderate");
  return run_binary_study(cfg);
}

ExperimentResult run_sparse_study(const ExperimentConfig& cfg) {
  if (cfg.regime != Regime::Sparse)
    throw std::invalid_argument("run_sparse_study: config.regime must be sparse");
  return run_binary_study(cfg);
}

ExperimentResult run_multinomial_study(const ExperimentConfig& cfg) {
  if (cfg.regime != Regime::Multinomial)
    throw std::invalid_argument("run_multinomial_study: config.regime must be multinomial");
  cfg.validate();
  const int workers = resolve_workers(cfg.workers);

  struct Task {
    std::size_t n_index;
    int replicate;
  };
  std::vector<Task> tasks;
  for (std::size_t ni = 0; ni < cfg.n_list.size(); ++ni)
    for (int r = 0; r < cfg.replicates; ++r) tasks.push_back({ni, r});

  std::vector<UnitVector> beta0s;
  for (std::size_t ni = 0; ni < cfg.n_list.size(); ++ni) {
    Rng rng({cfg.master_seed, ni}, kSaltBeta0);
    beta0s.push_back(make_moderate_beta0(cfg.p_for(cfg.n_list[ni]), rng));
  }

  const auto run_task = [&](long t) {
    const Task task = tasks[t];
    const long n = cfg.n_list[task.n_index];
    const int p = cfg.p_for(n);
    DgpSpec spec;
    spec.p = p;
    spec.beta0 = beta0s[task.n_index];
    spec.covariate_law = CovariateLaw::Ar1Gaussian;
    spec.rho = cfg.rho;
    spec.error_law = ErrorLaw::Gaussian;

    const SeedSpec data_seed{cfg.master_seed,
                             (task.n_index << 24) + static_cast<std::uint64_t>(task.replicate)};
    const MultinomialDataset data = generate_multinomial_dataset(spec, n, cfg.m, data_seed);
    const MultinomialDataset holdout =
        generate_multinomial_dataset(spec, n, cfg.m, {seed_key(data_seed, kSaltHoldout), 0});

    // grid maximizer of the multinomial score over seeded sphere points
    const auto start = std::chrono::steady_clock::now();
    Rng rng(SeedSpec{seed_key(data_seed, kSaltMethodSeed), 0});
    UnitVector best = sample_unit_sphere(p, rng);
    double best_score = multinomial_score(data, best);
    for (long g = 1; g < cfg.grid_points; ++g) {
      const UnitVector cand = sample_unit_sphere(p, rng);
      const double sc = multinomial_score(data, cand);
      if (sc > best_score) {
        best_score = sc;
        best = cand;
      }
    }
    const auto stop = std::chrono::steady_clock::now();

    long miss = 0;
    for (Eigen::Index i = 0; i < holdout.n(); ++i) {
      const Vector u = holdout.X[i] * best.coords();
      int argmax = 0;
      for (int j = 1; j < cfg.m; ++j)
        if (u[j] > u[argmax]) argmax = j;
      if (holdout.Y(i, argmax) != 1.0) ++miss;
    }

    ExperimentRow row;
    row.method = "grid";
    row.n = n;
    row.p = p;
    row.s0 = 0;
    row.replicate = task.replicate;
    row.norm_diff = (best.coords() - spec.beta0.coords()).norm();
    row.scaled_error = std::cbrt(static_cast<double>(n) / p) * row.norm_diff;
    row.misclass_rate = static_cast<double>(miss) / holdout.n();
    row.wall_time = std::chrono::duration<double>(stop - start).count();
    return std::vector<ExperimentRow>{row};
  };

  const auto chunks = parallel_tasks(static_cast<long>(tasks.size()), workers, run_task);
  ExperimentResult result;
  for (const auto& chunk : chunks) result.rows.insert(result.rows.end(), chunk.begin(), chunk.end());
  sort_rows(result.rows);
  return result;
}

ExperimentResult run_study(const ExperimentConfig& cfg) {
  switch (cfg.regime) {
    case Regime::Moderate: return run_moderate_growth_study(cfg);
    case Regime::Sparse: return run_sparse_study(cfg);
    case Regime::Multinomial: return run_multinomial_study(cfg);
  }
  throw std::invalid_argument("run_study: unknown regime");
}

void emit_csv(const ExperimentResult& result, const std::string& path, bool include_wall_time) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_csv: cannot open " + path);
  out << "method,n,p,s0,replicate,scaled_error,norm_diff,misclass_rate,type1,type2";
  if (include_wall_time) out << ",wall_time";
  out << "\n";
  for (const auto& r : result.rows) {
    out << r.method << "," << r.n << "," << r.p << "," << r.s0 << "," << r.replicate << ","
        << format_double(r.scaled_error) << "," << format_double(r.norm_diff) << ","
        << format_double(r.misclass_rate) << ",";
    if (r.type1 >= 0) out << r.type1;
    out << ",";
    if (r.type2 >= 0) out << r.type2;
    if (include_wall_time) out << "," << format_double(r.wall_time);
    out << "\n";
  }
}

ExperimentResult parse_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("parse_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("parse_csv: empty file " + path);
  const bool has_wall_time = line.find(",wall_time") != std::string::npos;
  ExperimentResult result;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    while (cells.size() < (has_wall_time ? 11u : 10u)) cells.push_back("");
    ExperimentRow r;
    r.method = cells[0];
    r.n = std::stol(cells[1]);
    r.p = std::stoi(cells[2]);
    r.s0 = std::stoi(cells[3]);
    r.replicate = std::stoi(cells[4]);
    r.scaled_error = std::stod(cells[5]);
    r.norm_diff = std::stod(cells[6]);
    r.misclass_rate = std::stod(cells[7]);
    r.type1 = cells[8].empty() ? -1 : std::stoi(cells[8]);
    r.type2 = cells[9].empty() ? -1 : std::stoi(cells[9]);
    if (has_wall_time && !cells[10].empty()) r.wall_time = std::stod(cells[10]);
    result.rows.push_back(std::move(r));
  }
  return result;
}

double silverman_bandwidth(std::vector<double> values) {
  const std::size_t n = values.size();
  if (n < 2) return 1.0;
  std::sort(values.begin(), values.end());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / (n - 1));
  const double q1 = values[static_cast<std::size_t>(0.25 * (n - 1))];
  const double q3 = values[static_cast<std::size_t>(0.75 * (n - 1))];
  const double iqr = q3 - q1;
  double spread = sd;
  if (iqr > 0) spread = std::min(sd, iqr / 1.34);
  if (!(spread > 0)) spread = sd > 0 ? sd : 1.0;
  return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

void emit_density_svg(const ExperimentResult& result, const std::string& group_key,
                      const std::string& path) {
  if (result.rows.empty()) throw std::invalid_argument("emit_density_svg: result is empty");
  if (group_key != "n" && group_key != "s0")
    throw std::invalid_argument("emit_density_svg: group_key must be 'n' or 's0'");

  std::map<std::string, std::vector<double>> groups;
  for (const auto& r : result.rows) {
    const long key = group_key == "n" ? r.n : r.s0;
    groups[r.method + ", " + group_key + "=" + std::to_string(key)].push_back(r.scaled_error);
  }

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (auto& [name, vals] : groups) {
    const double bw = silverman_bandwidth(vals);
    for (double v : vals) {
      lo = std::min(lo, v - 3 * bw);
      hi = std::max(hi, v + 3 * bw);
    }
  }
  if (!(hi > lo)) hi = lo + 1.0;

  const int width = 640, height = 420, margin = 50;
  const int curve_points = 200;
  struct Curve {
    std::string name;
    std::vector<double> ys;
  };
  std::vector<Curve> curves;
  double ymax = 0.0;
  for (auto& [name, vals] : groups) {
    const double bw = silverman_bandwidth(vals);
    Curve c{name, {}};
    for (int k = 0; k < curve_points; ++k) {
      const double x = lo + (hi - lo) * k / (curve_points - 1);
      double dens = 0.0;
      for (double v : vals) {
        const double u = (x - v) / bw;
        dens += std::exp(-0.5 * u * u);
      }
      dens /= vals.size() * bw * std::sqrt(2.0 * M_PI);
      c.ys.push_back(dens);
      ymax = std::max(ymax, dens);
    }
    curves.push_back(std::move(c));
  }
  if (!(ymax > 0)) ymax = 1.0;

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_density_svg: cannot open " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
      << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
      << height - margin << "\" stroke=\"black\"/>\n";
  char buf[64];
  for (int tick = 0; tick <= 4; ++tick) {
    const double xv = lo + (hi - lo) * tick / 4.0;
    const double xpix = margin + (width - 2.0 * margin) * tick / 4.0;
    std::snprintf(buf, sizeof(buf), "%.3g", xv);
    out << "<text x=\"" << xpix << "\" y=\"" << height - margin + 18
        << "\" font-size=\"11\" text-anchor=\"middle\">" << buf << "</text>\n";
  }
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - 8
      << "\" font-size=\"12\" text-anchor=\"middle\">scaled estimation error</text>\n";
  int ci = 0;
  for (const auto& c : curves) {
    out << "<polyline fill=\"none\" stroke=\"" << palette[ci % 8] << "\" stroke-width=\"1.5\" points=\"";
    for (int k = 0; k < curve_points; ++k) {
      const double xpix = margin + (width - 2.0 * margin) * k / (curve_points - 1.0);
      const double ypix = height - margin - (height - 2.0 * margin) * (c.ys[k] / ymax);
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", xpix, ypix);
      out << buf;
    }
    out << "\"/>\n";
    out << "<text x=\"" << width - margin - 180 << "\" y=\"" << margin + 16 * ci
        << "\" font-size=\"11\" fill=\"" << palette[ci % 8] << "\">" << c.name << "</text>\n";
    ++ci;
  }
  out << "</svg>\n";
}

}  // namespace maxscore
