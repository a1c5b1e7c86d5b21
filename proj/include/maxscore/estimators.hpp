#pragma once

// Estimation procedures for the binary choice model: exact 2-D maximizer,
// random grid search, smoothed-score ascent, convex surrogates (logistic and
// SVM, plain and l1-penalized) and SRM penalized subset selection.

#include <string>
#include <vector>

#include "maxscore/score.hpp"

namespace maxscore {

enum class Method {
  Exact2d,
  Grid,
  SmoothedAscent,
  Logistic,
  LogisticL1,
  Svm,
  SvmL1,
  Srm,
};

std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct EstimateResult {
  UnitVector beta_hat;
  double achieved_score = 0.0;  // empirical_score(data, beta_hat), recomputed
  Method method = Method::Exact2d;
  long evaluations = 0;
  std::vector<int> support;  // sparse methods only; nonzero coords at 1e-10
  bool degenerate = false;   // e.g. full l1 shrinkage to zero
  bool converged = true;
  int selected_sparsity = 0;   // SRM only
  bool exact_search = false;   // SRM only: every level enumerated exactly
  std::vector<double> level_scores;  // SRM only: best score per sparsity level
};

// Exact global maximizer of S_n over the unit circle (p = 2) by enumerating
// the 2n critical angles and the midpoints of consecutive arcs. Critical
// angles are evaluated with their zero set forced through the sgn(0) = +1
// convention, so boundary-only maxima are found too.
EstimateResult exact_max_score_2d(const BinaryDataset& data);

// Score argmax over grid_points uniform sphere draws (ties -> first seen).
// Points come from a single sequential stream, so smaller grids are prefixes
// of larger ones under the same seed.
EstimateResult grid_estimator(const BinaryDataset& data, long grid_points, const SeedSpec& seed);

// a_n (8n/p)^{(p-1)/3} with a_n = p; callers cap this by their budget.
double grid_theoretical_count(long n, int p);

struct AscentConfig {
  std::vector<double> xi_schedule = {1, 2, 4, 8, 16, 32, 64, 128, 256};
  double initial_step = 1.0;
  double rel_tol = 1e-8;
  int max_iterations_per_stage = 500;
};

// Projected gradient ascent of the smoothed score over the sphere across an
// increasing xi schedule; the result is re-scored with the exact empirical
// score. Throws on a NaN objective.
EstimateResult smoothed_gradient_ascent(const BinaryDataset& data, const UnitVector& init,
                                        const AscentConfig& cfg = {});

struct ConvexFitConfig {
  double lambda = 0.0;       // l1 penalty
  double margin_cost = 1.0;  // SVM hinge weight
  int max_iterations = 20000;
  double tol = 1e-8;  // gradient / prox-mapping norm
};

// Proximal-gradient logistic regression; the returned direction is
// normalized to the sphere. Non-convergence flags the result, it is not an
// error. A zero pre-normalization solution is flagged degenerate.
EstimateResult logistic_fit(const BinaryDataset& data, const ConvexFitConfig& cfg = {});

// Soft-margin SVM: mean hinge * margin_cost + 1e-6 ridge + lambda * l1,
// solved by proximal subgradient descent with tail averaging.
EstimateResult svm_fit(const BinaryDataset& data, const ConvexFitConfig& cfg = {});

// Selects the lambda maximizing the mean held-out empirical score over a
// deterministic fold split; ties -> smallest lambda.
double cross_validate(const BinaryDataset& data, Method method, const std::vector<double>& lambdas,
                      int folds, const SeedSpec& seed, double margin_cost = 1.0);

enum class SrmInnerSolver { ExactEnumeration, GreedyForwardSwap };

struct SrmConfig {
  double K = 1.0;   // penalty constant (>= 0; 0 disables the penalty)
  double C_n = 1.0; // in (0, 1]
  int max_sparsity = 0;  // 0 -> floor(n / (4 log p)), clamped to [1, p]
  SrmInnerSolver inner_solver = SrmInnerSolver::ExactEnumeration;
  long enumeration_budget = 20000;  // max supports enumerated per sparsity level
  long grid_points_per_support = 512;
  SeedSpec seed;
};

// V_i = i log(e p / i), the VC-dimension surrogate driving the SRM penalty.
double srm_vc_dimension(int i, int p);

// pen(M_i) = 2K [ (V_i sqrt(C_n) log(n/(V_i sqrt(C_n))) / n)^{2/3}
//                 v  (V_i log(n/V_i) / n) ], log arguments clamped at e.
double srm_penalty(int i, long n, int p, const SrmConfig& cfg);

// Penalized best-subset selection over nested sparsity classes.
EstimateResult srm_select(const BinaryDataset& data, const SrmConfig& cfg);

// type1 = |selected \ true|, type2 = |true \ selected|.
std::pair<int, int> support_metrics(const std::vector<int>& true_support,
                                    const std::vector<int>& selected_support);

// CSV row for an estimate: method,seed,n,p,s0,score,norm_diff,type1,type2,evals.
std::string estimate_csv_header();
std::string estimate_csv_row(const EstimateResult& r, std::uint64_t seed, long n, int p, int s0,
                             double norm_diff, int type1, int type2);

}  // namespace maxscore
