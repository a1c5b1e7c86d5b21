#pragma once

// Executable verification of the analytic ingredients: margin/transition
// constants, curvature, spherical-cap and divergence bounds, Gilbert-
// Varshamov packings and the minimax lower-bound families.

#include <cstdint>
#include <string>
#include <vector>

#include "maxscore/score.hpp"

namespace maxscore {

struct MarginEstimate {
  std::vector<double> t_grid;
  std::vector<double> prob;     // P(|eta(X) - 1/2| <= t) per t
  std::vector<double> stderr_;  // binomial standard errors
  double fitted_C = 0.0;        // least-squares slope through the origin
  bool nested_mc_fallback = false;
};

struct PackingSet {
  std::vector<std::vector<std::uint8_t>> codewords;  // 0/1 vectors of length d
  int d = 0;
  int s = 0;
  int min_pairwise_distance = 0;
};

// One machine-readable verification row: check,params,estimate,bound,stderr,pass.
struct CheckRow {
  std::string check;
  std::string params;
  double estimate = 0.0;
  double bound = 0.0;
  double stderr_ = 0.0;
  bool pass = true;
};
std::string check_row_csv(const CheckRow& row);

// --- transition condition ---------------------------------------------------

// MC estimate of the margin probabilities P(|eta(X) - 1/2| <= t) over t_grid
// (subset of (0, 1/2)) together with the fitted slope. force_nested_mc swaps
// the analytic eta for a nested-MC estimate (inner_samples error draws per
// covariate draw); the fallback is flagged on the result.
MarginEstimate transition_constant_estimate(const DgpSpec& spec, const std::vector<double>& t_grid,
                                            long mc_samples, const SeedSpec& seed,
                                            bool force_nested_mc = false,
                                            long inner_samples = 2000);

// --- curvature ---------------------------------------------------------------

struct CurvatureEntry {
  double dist = 0.0;      // ||beta - beta0||
  McValue excess;         // S(beta0) - S(beta)
  double ratio = 0.0;     // excess / min(dist^2 / C_hat, 2 t* dist)
  bool violation = false; // excess < -3 stderr
};
struct CurvatureReport {
  std::vector<CurvatureEntry> entries;
  double fitted_C = 0.0;
  double t_star = 0.2;
  int violations = 0;
};

CurvatureReport curvature_check(const DgpSpec& spec, const std::vector<UnitVector>& directions,
                                long mc_samples, const SeedSpec& seed, double t_star = 0.2);

// --- spherical cap bounds ----------------------------------------------------

struct CapCheck {
  double estimate = 0.0;
  double stderr_ = 0.0;
  double lower = 0.0;   // (1/2) (r/2)^{p-1}
  double upper = 0.0;   // r^{p-1} / (2 sqrt(2))
  bool pass = false;
  bool skipped = false;  // p < 8: bounds unproven, check skipped
};

CapCheck spherical_cap_bounds_check(int p, double r, long mc_samples, const SeedSpec& seed);

// --- Bernoulli divergences ---------------------------------------------------

double kl_bernoulli(double p1, double q1);        // KL(Ber(p1) || Ber(q1)), 0 log 0 = 0
double hellinger_bernoulli(double p1, double p2); // squared Hellinger distance

struct SweepCheck {
  long points = 0;
  long violations = 0;
  double worst_margin = 0.0;  // min over grid of bound - value
  bool pass = false;
};

// KL(P||Q) <= 16/3 (p-q)^2 on p1 in [0,1], q1 in [1/4,3/4], step 0.005.
SweepCheck kl_bound_check(double grid_step = 0.005);
// H^2 <= nu^2 / (4 sqrt(3) s (1-s)) on [1/4,3/4]^2, step 0.005.
SweepCheck hellinger_bound_check(double grid_step = 0.005);

// --- Gilbert-Varshamov packing ----------------------------------------------

// Greedy randomized construction of M = ceil(exp((s/8) log(1 + d/2s)))
// weight-s codewords at pairwise Hamming distance >= s/2. Throws when the
// attempt budget is exhausted before reaching M.
PackingSet gv_packing(int d, int s, long attempts, const SeedSpec& seed);
long gv_target_cardinality(int d, int s);

// --- minimax families ----------------------------------------------------------

// Piecewise conditional probability P(Y=1 | X=x) of the lower-bound
// construction; `delta` is the sparse family's delta or the moderate
// family's epsilon.
double minimax_family_condprob(MinimaxKind kind, const UnitVector& beta, double C, double delta,
                               const Vector& x);

struct MinimaxFamily {
  std::vector<UnitVector> betas;
  std::vector<DgpSpec> specs;
  double delta = 0.0;  // the separation parameter actually used
};

// Sparse family (Fano route): beta_J = (1, (delta/sqrt(s)) w_J)/sqrt(1+delta^2)
// over a GV packing of {0,1}^{p-1}; delta = ((s/64) log(p/s) / (n U_c))^{1/3} C^{2/3}.
// Moderate family (Assouad route): beta_w = (1, eps w)/m(eps) over hypercube
// corners; eps = (1/(2 zeta))^{1/3} n^{-1/3} p^{-1/6} C^{2/3}.
MinimaxFamily build_minimax_family_sparse(long n, int p, int s, double C, const SeedSpec& seed,
                                          int max_count = 64);
MinimaxFamily build_minimax_family_moderate(long n, int p, double C, const SeedSpec& seed,
                                            int max_count = 64);

double minimax_kl_constant();  // U_c from the sparse-family KL bound
double minimax_margin_constant();  // 5 sqrt(2/pi)

// --- multinomial checks --------------------------------------------------------

// Inner-MC estimate of the choice probabilities p(j | X) for a fixed
// covariate matrix under iid N(0, sigma^2) errors.
Vector estimate_choice_probabilities(const Matrix& Xi, const UnitVector& beta0, double sigma,
                                     long inner_samples, const SeedSpec& seed);

struct RankOrderingReport {
  long concordant = 0;
  long violations = 0;
  long inconclusive = 0;  // below MC resolution
  double concordance_rate = 1.0;
  bool pass = false;
};

RankOrderingReport rank_ordering_check(const DgpSpec& spec, int m, long n_matrices,
                                       long inner_samples, const SeedSpec& seed,
                                       double pass_threshold = 0.95);

// Paired MC estimate of S^mult(beta0) - S^mult(beta); exactly 0 at beta0.
McValue multinomial_excess_mc(const DgpSpec& spec, int m, const UnitVector& beta, long mc_samples,
                              const SeedSpec& seed);

struct MultinomialCurvatureEntry {
  double dist = 0.0;
  McValue excess;
  double ratio = 0.0;  // excess / dist^2
  bool violation = false;
};
std::vector<MultinomialCurvatureEntry> multinomial_curvature_check(
    const DgpSpec& spec, int m, const std::vector<UnitVector>& directions, long mc_samples,
    const SeedSpec& seed);

// On the geodesic from beta0 toward orth, the point at chord distance dist.
UnitVector direction_at_distance(const UnitVector& beta0, const UnitVector& orth, double dist);
// A unit vector orthogonal to beta0, derived deterministically from the seed.
UnitVector orthogonal_direction(const UnitVector& beta0, const SeedSpec& seed);

// MC estimate of P(sgn(X'b1) != sgn(X'b2)) for X ~ N(0, I_p); the oracle
// counterpart of the arccos closed form.
McValue gaussian_wedge_probability_mc(const UnitVector& b1, const UnitVector& b2, long mc_samples,
                                      const SeedSpec& seed);

// MC estimate of E_X[ KL(Ber(eta_I(X)) || Ber(eta_J(X))) ] between two
// members of a minimax family.
McValue minimax_pairwise_kl_mc(const DgpSpec& spec_i, const DgpSpec& spec_j, long mc_samples,
                               const SeedSpec& seed);

// --- named check registry (CLI `verify`) --------------------------------------

std::vector<std::string> list_checks();
std::vector<CheckRow> run_check(const std::string& name, std::uint64_t master_seed = 20240501);
std::vector<CheckRow> run_all_checks(std::uint64_t master_seed = 20240501);

}  // namespace maxscore
