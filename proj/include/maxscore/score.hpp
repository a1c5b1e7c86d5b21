#pragma once

// Empirical and population score/risk functionals for the binary and
// multinomial models.

#include "maxscore/core.hpp"

namespace maxscore {

// Monte Carlo estimate with its standard error.
struct McValue {
  double value = 0.0;
  double stderr_ = 0.0;
};

// (1/n) sum_i y_i sgn(x_i' beta), in [-1, 1]. Computed as 1 - 2 * risk from
// the same sign evaluations, so the affine identity with empirical_risk is
// exact at the bit level.
double empirical_score(const BinaryDataset& data, const UnitVector& beta);

// (1/n) sum_i 1{y_i != sgn(x_i' beta)}, in [0, 1].
double empirical_risk(const BinaryDataset& data, const UnitVector& beta);

// Misclassification count behind both functionals.
long misclassified_count(const BinaryDataset& data, const Vector& beta);

// Eq.-style multinomial score with strict inequalities; ties contribute 0.
// Value in [0, 1], attains 1/(m-1) * ... at most 1/2 when m = 2.
double multinomial_score(const MultinomialDataset& data, const UnitVector& beta);

// Monte Carlo estimate of S(beta) = E[Y sgn(X' beta)].
McValue population_score_mc(const DgpSpec& spec, const UnitVector& beta, long mc_samples,
                            const SeedSpec& seed);

// 1-D quadrature fast path for the isotropic-Gaussian model with independent
// N(0, sigma^2) errors: S(beta) depends only on <beta, beta0>.
double population_score_reference(const DgpSpec& spec, const UnitVector& beta);

// Exact P(sgn(X' b1) != sgn(X' b2)) for X ~ N(0, I): arccos(<b1,b2>)/pi.
double gaussian_wedge_probability(const UnitVector& b1, const UnitVector& b2);

// MC estimate of the excess risk S(beta0) - S(beta) via
// 4 E[ |eta(X) - 1/2| 1{sgn(X'beta) != sgn(X'beta0)} ].
McValue excess_risk_mc(const DgpSpec& spec, const UnitVector& beta, long mc_samples,
                       const SeedSpec& seed);

// Smoothed empirical score (1/n) sum_i y_i (2 sigmoid(xi x_i' beta) - 1);
// beta need not be normalized. Converges to empirical_score as xi -> inf at
// tie-free beta.
double smoothed_score(const BinaryDataset& data, const Vector& beta, double xi);
Vector smoothed_score_gradient(const BinaryDataset& data, const Vector& beta, double xi);

// Pairwise-difference reduction of an m = 2 dataset to the binary model:
// X_i = x_{i,1} - x_{i,2}, y_i = +1 iff alternative 1 was chosen.
BinaryDataset binary_from_multinomial_pair(const MultinomialDataset& data);

// MC estimate of the population multinomial score E S_n^{mult}(beta).
McValue multinomial_population_score_mc(const DgpSpec& spec, int m, const UnitVector& beta,
                                        long mc_samples, const SeedSpec& seed);

}  // namespace maxscore
