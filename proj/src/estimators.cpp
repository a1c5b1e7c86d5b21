#include "maxscore/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace maxscore {

namespace {

constexpr std::uint64_t kSaltGrid = 0x40;
constexpr std::uint64_t kSaltCvFolds = 0x41;
constexpr std::uint64_t kSaltSrmInner = 0x42;

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

Vector soft_threshold(const Vector& v, double t) {
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = soft_threshold(v[i], t);
  return out;
}

// log(1 + exp(-m)) without overflow.
double logistic_loss(double m) {
  return m > 0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
}

std::vector<int> support_of(const Vector& v, double tol = 1e-10) {
  std::vector<int> s;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > tol) s.push_back(static_cast<int>(i));
  return s;
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::Exact2d: return "exact-2d";
    case Method::Grid: return "grid";
    case Method::SmoothedAscent: return "smoothed";
    case Method::Logistic: return "logistic";
    case Method::LogisticL1: return "logistic-l1";
    case Method::Svm: return "svm";
    case Method::SvmL1: return "svm-l1";
    case Method::Srm: return "srm";
  }
  return "?";
}

Method method_from_name(const std::string& name) {
  static const std::map<std::string, Method> table = {
      {"exact-2d", Method::Exact2d},   {"grid", Method::Grid},
      {"smoothed", Method::SmoothedAscent}, {"logistic", Method::Logistic},
      {"logistic-l1", Method::LogisticL1},  {"svm", Method::Svm},
      {"svm-l1", Method::SvmL1},       {"srm", Method::Srm}};
  const auto it = table.find(name);
  if (it == table.end()) throw std::invalid_argument("unknown method '" + name + "'");
  return it->second;
}

EstimateResult exact_max_score_2d(const BinaryDataset& data) {
  if (data.p() != 2) throw std::invalid_argument("exact_max_score_2d: p must be 2");
  if (data.n() < 1) throw std::invalid_argument("exact_max_score_2d: n must be >= 1");
  const double two_pi = 2.0 * M_PI;

  // S_n is piecewise constant in the angle with breakpoints where some
  // x_i' beta(theta) = 0, i.e. at the two rotations of each covariate.
  // Candidates: the breakpoint directions themselves plus one interior point
  // per arc. Breakpoint candidates are built by rotating the covariate
  // exactly, (x1,x2) -> (-x2,x1), so their dot with that covariate (and any
  // exact duplicate or antipode of it) cancels to 0.0 in floating point and
  // the sgn(0)=+1 convention engages on re-evaluation.
  struct Candidate {
    double theta;
    Vector beta;
  };
  std::vector<Candidate> candidates;
  std::vector<double> breakpoints;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    const double x1 = data.X(i, 0), x2 = data.X(i, 1);
    if (x1 == 0.0 && x2 == 0.0) continue;  // constant contribution
    for (int s : {1, -1}) {
      Vector w(2);
      w << -s * x2, s * x1;
      double theta = std::atan2(w[1], w[0]);
      if (theta < 0) theta += two_pi;
      candidates.push_back({theta, w / w.norm()});
      breakpoints.push_back(theta);
    }
  }
  if (candidates.empty()) {
    Vector e1(2);
    e1 << 1, 0;
    candidates.push_back({0.0, e1});
  } else {
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end(),
                                  [](double a, double b) { return b - a <= 1e-12; }),
                      breakpoints.end());
    for (std::size_t g = 0; g < breakpoints.size(); ++g) {
      const double next = g + 1 < breakpoints.size() ? breakpoints[g + 1]
                                                     : breakpoints.front() + two_pi;
      const double mid = std::fmod((breakpoints[g] + next) / 2.0, two_pi);
      Vector w(2);
      w << std::cos(mid), std::sin(mid);
      candidates.push_back({mid, w});
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) { return a.theta < b.theta; });
  }

  long best_miss = std::numeric_limits<long>::max();
  const Vector* best = nullptr;
  for (const auto& cand : candidates) {
    const long miss = misclassified_count(data, cand.beta);
    if (miss < best_miss) {
      best_miss = miss;
      best = &cand.beta;
    }
  }

  EstimateResult out;
  out.beta_hat = UnitVector(*best);  // keep the winning bits: re-scoring must reproduce the score
  out.achieved_score = 1.0 - 2.0 * static_cast<double>(best_miss) / data.n();
  out.method = Method::Exact2d;
  out.evaluations = static_cast<long>(candidates.size());
  return out;
}

double grid_theoretical_count(long n, int p) {
  return static_cast<double>(p) *
         std::pow(8.0 * static_cast<double>(n) / p, (p - 1) / 3.0);
}

EstimateResult grid_estimator(const BinaryDataset& data, long grid_points, const SeedSpec& seed) {
  if (grid_points < 1) throw std::invalid_argument("grid_estimator: grid_points must be >= 1");
  Rng rng(seed, kSaltGrid);
  const int p = static_cast<int>(data.p());
  long best_miss = std::numeric_limits<long>::max();
  Vector best = Vector::Zero(p);
  for (long g = 0; g < grid_points; ++g) {
    const UnitVector cand = sample_unit_sphere(p, rng);
    const long miss = misclassified_count(data, cand.coords());
    if (miss < best_miss) {
      best_miss = miss;
      best = cand.coords();
    }
  }
  EstimateResult out;
  out.beta_hat = UnitVector(best);
  out.achieved_score = 1.0 - 2.0 * static_cast<double>(best_miss) / data.n();
  out.method = Method::Grid;
  out.evaluations = grid_points;
  return out;
}

EstimateResult smoothed_gradient_ascent(const BinaryDataset& data, const UnitVector& init,
                                        const AscentConfig& cfg) {
  Vector beta = init.coords();
  long evals = 0;
  // stage endpoints are polished against the exact score; the init is a
  // candidate too, so the result never scores below its starting point
  UnitVector best = init;
  long best_miss = misclassified_count(data, init.coords());
  for (double xi : cfg.xi_schedule) {
    double obj = smoothed_score(data, beta, xi);
    ++evals;
    if (std::isnan(obj))
      throw std::runtime_error("smoothed_gradient_ascent: objective is NaN at xi=" +
                               std::to_string(xi));
    double step = cfg.initial_step / xi;
    for (int it = 0; it < cfg.max_iterations_per_stage; ++it) {
      const Vector g = smoothed_score_gradient(data, beta, xi);
      Vector cand = beta + step * g;
      const double nrm = cand.norm();
      if (!(nrm > 0)) break;
      cand /= nrm;
      const double cobj = smoothed_score(data, cand, xi);
      ++evals;
      if (std::isnan(cobj))
        throw std::runtime_error("smoothed_gradient_ascent: objective is NaN at xi=" +
                                 std::to_string(xi));
      if (cobj > obj) {
        const double rel = (cobj - obj) / (std::abs(obj) + 1e-12);
        beta = cand;
        obj = cobj;
        step *= 1.25;
        if (rel < cfg.rel_tol) break;
      } else {
        step *= 0.5;
        if (step < 1e-14) break;
      }
    }
    const long miss = misclassified_count(data, beta);
    if (miss < best_miss) {
      best_miss = miss;
      best = UnitVector::normalized(beta);
    }
  }
  EstimateResult out;
  out.beta_hat = best;
  out.achieved_score = 1.0 - 2.0 * static_cast<double>(best_miss) / data.n();
  out.method = Method::SmoothedAscent;
  out.evaluations = evals;
  return out;
}

namespace {

struct LogisticObjective {
  const BinaryDataset& data;
  double lambda;

  double smooth(const Vector& beta) const {
    const Vector z = data.X * beta;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < data.n(); ++i) acc += logistic_loss(data.y[i] * z[i]);
    return acc / data.n();
  }
  Vector grad(const Vector& beta) const {
    const Vector z = data.X * beta;
    Vector w(data.n());
    for (Eigen::Index i = 0; i < data.n(); ++i) {
      const double m = data.y[i] * z[i];
      const double s = m > 0 ? std::exp(-m) / (1.0 + std::exp(-m)) : 1.0 / (1.0 + std::exp(m));
      w[i] = -data.y[i] * s;
    }
    return data.X.transpose() * w / data.n();
  }
};

double top_singular_value_sq(const Matrix& X) {
  Vector v = Vector::Ones(X.cols()).normalized();
  double lam = 0.0;
  for (int it = 0; it < 30; ++it) {
    Vector w = X.transpose() * (X * v);
    lam = w.norm();
    if (!(lam > 0)) return 1.0;
    v = w / lam;
  }
  return lam;
}

}  // namespace

EstimateResult logistic_fit(const BinaryDataset& data, const ConvexFitConfig& cfg) {
  if (cfg.lambda < 0) throw std::invalid_argument("logistic_fit: lambda must be >= 0");
  const Eigen::Index p = data.p();
  const LogisticObjective obj{data, cfg.lambda};
  const double L0 = std::max(1e-8, top_singular_value_sq(data.X) / (4.0 * data.n()));
  double L = L0;

  Vector x = Vector::Zero(p), yv = x;
  double t = 1.0;
  double fx = obj.smooth(x) + cfg.lambda * x.lpNorm<1>();
  long evals = 0;
  bool converged = false;
  for (int k = 0; k < cfg.max_iterations; ++k) {
    if (k % 20 == 0) {  // prox-gradient mapping norm at the incumbent
      const Vector gx = obj.grad(x);
      ++evals;
      const double mapping = (L * (x - soft_threshold(x - gx / L, cfg.lambda / L))).norm();
      if (mapping <= cfg.tol) {
        converged = true;
        break;
      }
    }
    const Vector g = obj.grad(yv);
    const double fy = obj.smooth(yv);
    ++evals;
    L = std::max(L0, L * 0.97);  // heal transient backtracking inflation
    Vector xn;
    double fyn;
    for (;;) {  // backtracking on L; relative slack absorbs FP noise in fs - fy
      xn = soft_threshold(yv - g / L, cfg.lambda / L);
      const double fs = obj.smooth(xn);
      const Vector d = xn - yv;
      if (fs <= fy + g.dot(d) + 0.5 * L * d.squaredNorm() + 1e-12 * (1.0 + std::abs(fy)) ||
          L > 1e16) {
        fyn = fs + cfg.lambda * xn.lpNorm<1>();
        break;
      }
      L *= 2.0;
    }
    if (fyn > fx + 1e-14 * (1.0 + std::abs(fx))) {  // adaptive restart
      yv = x;
      t = 1.0;
      continue;
    }
    const double tn = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
    yv = xn + ((t - 1.0) / tn) * (xn - x);
    x = xn;
    fx = fyn;
    t = tn;
  }

  EstimateResult out;
  out.method = cfg.lambda > 0 ? Method::LogisticL1 : Method::Logistic;
  out.evaluations = evals;
  out.converged = converged;
  out.support = support_of(x);
  if (x.norm() <= 1e-10) {
    out.degenerate = true;
    Vector e = Vector::Zero(p);
    e[0] = 1.0;
    out.beta_hat = UnitVector(e);
  } else {
    out.beta_hat = UnitVector::normalized(x);
  }
  out.achieved_score = empirical_score(data, out.beta_hat);
  return out;
}

EstimateResult svm_fit(const BinaryDataset& data, const ConvexFitConfig& cfg) {
  if (cfg.lambda < 0) throw std::invalid_argument("svm_fit: lambda must be >= 0");
  const Eigen::Index n = data.n(), p = data.p();
  const double ridge = 1e-6;
  const auto objective = [&](const Vector& b) {
    const Vector z = data.X * b;
    double hinge = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) hinge += std::max(0.0, 1.0 - data.y[i] * z[i]);
    return cfg.margin_cost * hinge / n + 0.5 * ridge * b.squaredNorm() +
           cfg.lambda * b.lpNorm<1>();
  };

  Vector beta = Vector::Zero(p), avg = Vector::Zero(p);
  long avg_count = 0;
  const long T = cfg.max_iterations;
  double obj_mid = 0.0;
  for (long it = 1; it <= T; ++it) {
    const Vector z = data.X * beta;
    Vector w = Vector::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i)
      if (data.y[i] * z[i] < 1.0) w[i] = -data.y[i];
    Vector sub = cfg.margin_cost * (data.X.transpose() * w) / n + ridge * beta;
    const double step = 1.0 / std::sqrt(static_cast<double>(it));
    beta = soft_threshold(beta - step * sub, step * cfg.lambda);
    if (2 * it > T) {
      avg += beta;
      ++avg_count;
    }
    if (it == std::max<long>(1, T / 2)) obj_mid = objective(beta);
  }
  if (avg_count > 0) avg /= static_cast<double>(avg_count);
  const double obj_end = objective(avg);

  EstimateResult out;
  out.method = cfg.lambda > 0 ? Method::SvmL1 : Method::Svm;
  out.evaluations = T;
  out.converged =
      std::abs(obj_end - obj_mid) <= 1e-2 * (std::abs(obj_end) + 1e-12) || T >= 100000;
  out.support = support_of(avg);
  if (avg.norm() <= 1e-10) {
    out.degenerate = true;
    Vector e = Vector::Zero(p);
    e[0] = 1.0;
    out.beta_hat = UnitVector(e);
  } else {
    out.beta_hat = UnitVector::normalized(avg);
  }
  out.achieved_score = empirical_score(data, out.beta_hat);
  return out;
}

double cross_validate(const BinaryDataset& data, Method method, const std::vector<double>& lambdas,
                      int folds, const SeedSpec& seed, double margin_cost) {
  if (lambdas.empty()) throw std::invalid_argument("cross_validate: empty lambda grid");
  if (folds < 2) throw std::invalid_argument("cross_validate: folds must be >= 2");
  if (method != Method::Logistic && method != Method::LogisticL1 && method != Method::Svm &&
      method != Method::SvmL1)
    throw std::invalid_argument("cross_validate: only convex-surrogate methods are supported");
  const Eigen::Index n = data.n();
  if (n < folds) throw std::invalid_argument("cross_validate: n must be >= folds");

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed, kSaltCvFolds);
  for (Eigen::Index i = n - 1; i > 0; --i)
    std::swap(order[i], order[rng.below(static_cast<std::uint64_t>(i + 1))]);

  std::vector<double> grid = lambdas;
  std::sort(grid.begin(), grid.end());

  const bool is_svm = method == Method::Svm || method == Method::SvmL1;
  double best_lambda = grid.front();
  double best_mean = -std::numeric_limits<double>::infinity();
  for (double lambda : grid) {
    double mean = 0.0;
    for (int f = 0; f < folds; ++f) {
      const Eigen::Index lo = n * f / folds, hi = n * (f + 1) / folds;
      BinaryDataset train, test;
      train.X.resize(n - (hi - lo), data.p());
      train.y.resize(n - (hi - lo));
      test.X.resize(hi - lo, data.p());
      test.y.resize(hi - lo);
      Eigen::Index ti = 0, vi = 0;
      for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index row = order[k];
        if (k >= lo && k < hi) {
          test.X.row(vi) = data.X.row(row);
          test.y[vi++] = data.y[row];
        } else {
          train.X.row(ti) = data.X.row(row);
          train.y[ti++] = data.y[row];
        }
      }
      ConvexFitConfig cfg;
      cfg.lambda = lambda;
      cfg.margin_cost = margin_cost;
      cfg.max_iterations = is_svm ? 2000 : 4000;
      const EstimateResult fit = is_svm ? svm_fit(train, cfg) : logistic_fit(train, cfg);
      mean += empirical_score(test, fit.beta_hat);
    }
    mean /= folds;
    if (mean > best_mean) {  // ties keep the smaller lambda (grid is sorted)
      best_mean = mean;
      best_lambda = lambda;
    }
  }
  return best_lambda;
}

double srm_vc_dimension(int i, int p) {
  return static_cast<double>(i) * std::log(M_E * static_cast<double>(p) / i);
}

double srm_penalty(int i, long n, int p, const SrmConfig& cfg) {
  const int cap = cfg.max_sparsity > 0
                      ? std::min(cfg.max_sparsity, p)
                      : std::min(p, std::max(1, static_cast<int>(n / (4.0 * std::log(p)))));
  if (i < 1 || i > cap) throw std::invalid_argument("srm_penalty: sparsity index out of range");
  const double V = srm_vc_dimension(i, p);
  const double sc = std::sqrt(cfg.C_n);
  const double a1 = V * sc * std::log(std::max(M_E, n / (V * sc))) / n;
  const double a2 = V * std::log(std::max(M_E, n / V)) / n;
  return 2.0 * cfg.K * std::max(std::pow(a1, 2.0 / 3.0), a2);
}

namespace {

struct SupportFit {
  Vector beta;  // full-dimensional, zeros off support
  long miss;
  std::vector<int> support;
};

BinaryDataset restrict_columns(const BinaryDataset& data, const std::vector<int>& support) {
  BinaryDataset out;
  out.X.resize(data.n(), static_cast<Eigen::Index>(support.size()));
  for (std::size_t j = 0; j < support.size(); ++j) out.X.col(j) = data.X.col(support[j]);
  out.y = data.y;
  return out;
}

Vector embed(const Vector& restricted, const std::vector<int>& support, Eigen::Index p) {
  Vector full = Vector::Zero(p);
  for (std::size_t j = 0; j < support.size(); ++j) full[support[j]] = restricted[j];
  return full;
}

// Best score direction supported on `support`; exact for |support| <= 2.
SupportFit maximize_on_support(const BinaryDataset& data, const std::vector<int>& support,
                               const SrmConfig& cfg, const Vector* warm_start) {
  const Eigen::Index p = data.p();
  const int m = static_cast<int>(support.size());
  SupportFit best;
  best.support = support;
  best.miss = std::numeric_limits<long>::max();

  const auto consider = [&](const Vector& full) {
    const long miss = misclassified_count(data, full);
    if (miss < best.miss) {
      best.miss = miss;
      best.beta = full;
    }
  };

  if (m == 1) {
    Vector e = Vector::Zero(p);
    e[support[0]] = 1.0;
    consider(e);
    e[support[0]] = -1.0;
    consider(e);
  } else if (m == 2) {
    const BinaryDataset sub = restrict_columns(data, support);
    const EstimateResult r = exact_max_score_2d(sub);
    consider(embed(r.beta_hat.coords(), support, p));
  } else {
    const BinaryDataset sub = restrict_columns(data, support);
    std::uint64_t salt = kSaltSrmInner;
    for (int j : support) salt = mix64(salt ^ static_cast<std::uint64_t>(j + 1));
    Rng rng(cfg.seed, salt);
    Vector best_sub = sample_unit_sphere(m, rng).coords();
    long best_sub_miss = misclassified_count(sub, best_sub);
    for (long g = 1; g < cfg.grid_points_per_support; ++g) {
      const Vector cand = sample_unit_sphere(m, rng).coords();
      const long miss = misclassified_count(sub, cand);
      if (miss < best_sub_miss) {
        best_sub_miss = miss;
        best_sub = cand;
      }
    }
    AscentConfig acfg;
    acfg.xi_schedule = {4, 32, 256};
    acfg.max_iterations_per_stage = 100;
    const EstimateResult r = smoothed_gradient_ascent(sub, UnitVector(best_sub), acfg);
    consider(embed(r.beta_hat.coords(), support, p));
    consider(embed(best_sub, support, p));
  }
  if (warm_start) consider(*warm_start);
  return best;
}

double binomial_count(int p, int m) {
  double c = 1.0;
  for (int i = 0; i < m; ++i) {
    c *= static_cast<double>(p - i) / (i + 1);
    if (c > 1e18) return 1e18;
  }
  return c;
}

}  // namespace

EstimateResult srm_select(const BinaryDataset& data, const SrmConfig& cfg) {
  const int p = static_cast<int>(data.p());
  const long n = data.n();
  if (p < 2) throw std::invalid_argument("srm_select: p must be >= 2");
  if (!(cfg.K >= 0)) throw std::invalid_argument("srm_select: K must be >= 0");
  if (!(cfg.C_n > 0 && cfg.C_n <= 1)) throw std::invalid_argument("srm_select: C_n must be in (0,1]");
  const int max_m = cfg.max_sparsity > 0
                        ? std::min(cfg.max_sparsity, p)
                        : std::min(p, std::max(1, static_cast<int>(n / (4.0 * std::log(p)))));

  std::vector<SupportFit> best_by_m;
  bool all_exact = true;
  long evals = 0;

  for (int m = 1; m <= max_m; ++m) {
    const bool exact = cfg.inner_solver == SrmInnerSolver::ExactEnumeration &&
                       binomial_count(p, m) <= static_cast<double>(cfg.enumeration_budget);
    SupportFit level;
    level.miss = std::numeric_limits<long>::max();
    if (exact) {
      std::vector<int> comb(m);
      std::iota(comb.begin(), comb.end(), 0);
      for (;;) {
        // the previous level's optimum is a feasible candidate whenever its
        // support is nested, which makes the level scores nondecreasing
        const bool nested =
            !best_by_m.empty() &&
            std::includes(comb.begin(), comb.end(), best_by_m.back().support.begin(),
                          best_by_m.back().support.end());
        const SupportFit fit =
            maximize_on_support(data, comb, cfg, nested ? &best_by_m.back().beta : nullptr);
        ++evals;
        if (fit.miss < level.miss) level = fit;
        int j = m - 1;
        while (j >= 0 && comb[j] == p - m + j) --j;
        if (j < 0) break;
        ++comb[j];
        for (int k = j + 1; k < m; ++k) comb[k] = comb[k - 1] + 1;
      }
    } else {
      all_exact = false;
      // greedy forward step from the previous level, then single-swap search
      std::vector<int> base = best_by_m.empty() ? std::vector<int>{} : best_by_m.back().support;
      SupportFit step;
      step.miss = std::numeric_limits<long>::max();
      for (int j = 0; j < p; ++j) {
        if (std::find(base.begin(), base.end(), j) != base.end()) continue;
        std::vector<int> cand = base;
        cand.push_back(j);
        std::sort(cand.begin(), cand.end());
        const SupportFit fit = maximize_on_support(
            data, cand, cfg, best_by_m.empty() ? nullptr : &best_by_m.back().beta);
        ++evals;
        if (fit.miss < step.miss) step = fit;
      }
      for (int round = 0; round < 10; ++round) {
        bool improved = false;
        for (int out_j : std::vector<int>(step.support)) {
          for (int in_j = 0; in_j < p; ++in_j) {
            if (std::find(step.support.begin(), step.support.end(), in_j) != step.support.end())
              continue;
            std::vector<int> cand;
            for (int k : step.support)
              if (k != out_j) cand.push_back(k);
            cand.push_back(in_j);
            std::sort(cand.begin(), cand.end());
            const SupportFit fit = maximize_on_support(data, cand, cfg, nullptr);
            ++evals;
            if (fit.miss < step.miss) {
              step = fit;
              improved = true;
            }
          }
        }
        if (!improved) break;
      }
      level = step;
    }
    best_by_m.push_back(level);
  }

  int best_m = 1;
  double best_crit = std::numeric_limits<double>::infinity();
  std::vector<double> level_scores;
  for (int m = 1; m <= max_m; ++m) {
    const double score = 1.0 - 2.0 * static_cast<double>(best_by_m[m - 1].miss) / n;
    level_scores.push_back(score);
    const double crit = -score + srm_penalty(m, n, p, cfg);
    if (crit < best_crit) {  // ties keep the smaller sparsity
      best_crit = crit;
      best_m = m;
    }
  }

  const SupportFit& sel = best_by_m[best_m - 1];
  EstimateResult out;
  out.beta_hat = UnitVector::normalized(sel.beta);
  out.achieved_score = 1.0 - 2.0 * static_cast<double>(sel.miss) / n;
  out.method = Method::Srm;
  out.evaluations = evals;
  out.support = support_of(sel.beta);
  out.selected_sparsity = best_m;
  out.exact_search = all_exact;
  out.level_scores = std::move(level_scores);
  return out;
}

std::pair<int, int> support_metrics(const std::vector<int>& true_support,
                                    const std::vector<int>& selected_support) {
  std::vector<int> t = true_support, s = selected_support;
  std::sort(t.begin(), t.end());
  std::sort(s.begin(), s.end());
  std::vector<int> diff;
  std::set_difference(s.begin(), s.end(), t.begin(), t.end(), std::back_inserter(diff));
  const int type1 = static_cast<int>(diff.size());
  diff.clear();
  std::set_difference(t.begin(), t.end(), s.begin(), s.end(), std::back_inserter(diff));
  const int type2 = static_cast<int>(diff.size());
  return {type1, type2};
}

std::string estimate_csv_header() {
  return "method,seed,n,p,s0,score,norm_diff,type1,type2,evals";
}

std::string estimate_csv_row(const EstimateResult& r, std::uint64_t seed, long n, int p, int s0,
                             double norm_diff, int type1, int type2) {
  std::ostringstream out;
  out << method_name(r.method) << "," << seed << "," << n << "," << p << "," << s0 << ","
      << format_double(r.achieved_score) << ",";
  if (!std::isnan(norm_diff)) out << format_double(norm_diff);
  out << ",";
  if (type1 >= 0) out << type1;
  out << ",";
  if (type2 >= 0) out << type2;
  out << "," << r.evaluations;
  return out.str();
}

}  // namespace maxscore
