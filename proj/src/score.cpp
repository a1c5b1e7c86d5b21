#include "maxscore/score.hpp"

#include <cmath>

namespace maxscore {

namespace {

void check_dim(Eigen::Index have, Eigen::Index want, const char* where) {
  if (have != want) throw std::invalid_argument(std::string(where) + ": dimension mismatch");
}

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

McValue mc_from_moments(double sum, double sumsq, long n) {
  const double mean = sum / n;
  const double var = std::max(0.0, sumsq / n - mean * mean);
  return {mean, std::sqrt(var / n)};
}

constexpr std::uint64_t kSaltPopulationMc = 0x20;
constexpr std::uint64_t kSaltExcessMc = 0x21;
constexpr std::uint64_t kSaltMultPopMc = 0x22;

}  // namespace

long misclassified_count(const BinaryDataset& data, const Vector& beta) {
  check_dim(beta.size(), data.p(), "misclassified_count");
  const Vector z = data.X * beta;
  long miss = 0;
  for (Eigen::Index i = 0; i < data.n(); ++i)
    if (sgn(z[i]) != data.y[i]) ++miss;
  return miss;
}

double empirical_risk(const BinaryDataset& data, const UnitVector& beta) {
  return static_cast<double>(misclassified_count(data, beta.coords())) /
         static_cast<double>(data.n());
}

double empirical_score(const BinaryDataset& data, const UnitVector& beta) {
  return 1.0 - 2.0 * empirical_risk(data, beta);
}

double multinomial_score(const MultinomialDataset& data, const UnitVector& beta) {
  check_dim(beta.dim(), data.p(), "multinomial_score");
  const Eigen::Index n = data.n();
  const Eigen::Index m = data.m();
  long hits = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector u = data.X[i] * beta.coords();
    for (Eigen::Index j = 0; j < m; ++j) {
      if (data.Y(i, j) != 1.0) continue;
      for (Eigen::Index k = 0; k < m; ++k)
        if (k != j && u[j] > u[k]) ++hits;
    }
  }
  return static_cast<double>(hits) / (static_cast<double>(n) * m * (m - 1));
}

McValue population_score_mc(const DgpSpec& spec, const UnitVector& beta, long mc_samples,
                            const SeedSpec& seed) {
  spec.validate();
  if (mc_samples < 100) throw std::invalid_argument("population_score_mc: mc_samples must be >= 100");
  const Eigen::Index dim = spec.intercept ? spec.p + 1 : spec.p;
  check_dim(beta.dim(), dim, "population_score_mc");

  Rng rng(seed, kSaltPopulationMc);
  const Matrix L = spec.covariate_law == CovariateLaw::Ar1Gaussian
                       ? cholesky_with_ridge(ar1_covariance(spec.p, spec.rho))
                       : Matrix();
  Vector x(dim);
  Vector raw(spec.p);
  double sum = 0.0, sumsq = 0.0;
  for (long t = 0; t < mc_samples; ++t) {
    for (int j = 0; j < spec.p; ++j) raw[j] = rng.normal();
    if (L.size() > 0) raw = (L * raw).eval();
    if (spec.intercept) {
      x[0] = 1.0;
      x.tail(spec.p) = raw;
    } else {
      x = raw;
    }
    // E[Y | X] = 2 eta(X) - 1, so the per-draw integrand (2 eta - 1) sgn(x'b)
    // is a Rao-Blackwellized version of Y sgn(X' beta).
    const double g = (2.0 * dgp_eta(spec, x) - 1.0) * sgn(x.dot(beta.coords()));
    sum += g;
    sumsq += g * g;
  }
  return mc_from_moments(sum, sumsq, mc_samples);
}

double population_score_reference(const DgpSpec& spec, const UnitVector& beta) {
  if (spec.covariate_law != CovariateLaw::IsotropicGaussian ||
      spec.error_law != ErrorLaw::Gaussian || spec.intercept)
    throw std::invalid_argument("population_score_reference: requires the reference model");
  check_dim(beta.dim(), spec.p, "population_score_reference");
  const double r = std::clamp(beta.dot(spec.beta0), -1.0, 1.0);
  // S(beta) = E[(2 Phi(Z/sigma) - 1)(2 Phi(r Z / sqrt(1-r^2)) - 1)], Z ~ N(0,1);
  // composite Simpson on [-10, 10].
  const auto phi_cdf = [](double v) { return 0.5 * std::erfc(-v * M_SQRT1_2); };
  const auto integrand = [&](double z) {
    const double a = 2.0 * phi_cdf(z / spec.sigma) - 1.0;
    double b;
    if (std::abs(r) >= 1.0 - 1e-15)
      b = r > 0 ? sgn(z) : -sgn(z);
    else
      b = 2.0 * phi_cdf(r * z / std::sqrt(1.0 - r * r)) - 1.0;
    const double dens = std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
    return a * b * dens;
  };
  const int segments = 4000;
  const double lo = -10.0, hi = 10.0, h = (hi - lo) / segments;
  double acc = integrand(lo) + integrand(hi);
  for (int k = 1; k < segments; ++k) acc += (k % 2 ? 4.0 : 2.0) * integrand(lo + k * h);
  return acc * h / 3.0;
}

double gaussian_wedge_probability(const UnitVector& b1, const UnitVector& b2) {
  check_dim(b1.dim(), b2.dim(), "gaussian_wedge_probability");
  const double c = std::clamp(b1.dot(b2), -1.0, 1.0);
  return std::acos(c) / M_PI;
}

McValue excess_risk_mc(const DgpSpec& spec, const UnitVector& beta, long mc_samples,
                       const SeedSpec& seed) {
  spec.validate();
  const Eigen::Index dim = spec.intercept ? spec.p + 1 : spec.p;
  check_dim(beta.dim(), dim, "excess_risk_mc");
  if (spec.intercept) throw std::invalid_argument("excess_risk_mc: intercept model not supported");

  Rng rng(seed, kSaltExcessMc);
  const Matrix L = spec.covariate_law == CovariateLaw::Ar1Gaussian
                       ? cholesky_with_ridge(ar1_covariance(spec.p, spec.rho))
                       : Matrix();
  Vector x(spec.p);
  double sum = 0.0, sumsq = 0.0;
  for (long t = 0; t < mc_samples; ++t) {
    for (int j = 0; j < spec.p; ++j) x[j] = rng.normal();
    if (L.size() > 0) x = (L * x).eval();
    const double z0 = x.dot(spec.beta0.coords());
    const double zb = x.dot(beta.coords());
    double g = 0.0;
    if (sgn(zb) != sgn(z0)) g = 4.0 * std::abs(dgp_eta(spec, x) - 0.5);
    sum += g;
    sumsq += g * g;
  }
  return mc_from_moments(sum, sumsq, mc_samples);
}

double smoothed_score(const BinaryDataset& data, const Vector& beta, double xi) {
  if (!(xi > 0.0)) throw std::invalid_argument("smoothed_score: xi must be > 0");
  check_dim(beta.size(), data.p(), "smoothed_score");
  const Vector z = data.X * beta;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < data.n(); ++i)
    acc += data.y[i] * (2.0 * sigmoid(xi * z[i]) - 1.0);
  return acc / static_cast<double>(data.n());
}

Vector smoothed_score_gradient(const BinaryDataset& data, const Vector& beta, double xi) {
  if (!(xi > 0.0)) throw std::invalid_argument("smoothed_score_gradient: xi must be > 0");
  check_dim(beta.size(), data.p(), "smoothed_score_gradient");
  const Vector z = data.X * beta;
  Vector w(data.n());
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    const double s = sigmoid(xi * z[i]);
    w[i] = data.y[i] * 2.0 * xi * s * (1.0 - s);
  }
  return data.X.transpose() * w / static_cast<double>(data.n());
}

BinaryDataset binary_from_multinomial_pair(const MultinomialDataset& data) {
  if (data.m() != 2) throw std::invalid_argument("binary_from_multinomial_pair: m must be 2");
  BinaryDataset out;
  out.X.resize(data.n(), data.p());
  out.y.resize(data.n());
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    out.X.row(i) = data.X[i].row(0) - data.X[i].row(1);
    out.y[i] = data.Y(i, 0) == 1.0 ? 1.0 : -1.0;
  }
  return out;
}

McValue multinomial_population_score_mc(const DgpSpec& spec, int m, const UnitVector& beta,
                                        long mc_samples, const SeedSpec& seed) {
  spec.validate();
  if (m < 2) throw std::invalid_argument("multinomial_population_score_mc: m must be >= 2");
  check_dim(beta.dim(), spec.p, "multinomial_population_score_mc");
  if (spec.error_law == ErrorLaw::MinimaxFamily)
    throw std::invalid_argument("multinomial_population_score_mc: minimax family is binary-only");

  Rng rng(seed, kSaltMultPopMc);
  const Matrix L = spec.covariate_law == CovariateLaw::Ar1Gaussian
                       ? cholesky_with_ridge(ar1_covariance(spec.p, spec.rho))
                       : Matrix();
  double sum = 0.0, sumsq = 0.0;
  Matrix Xi(m, spec.p);
  for (long t = 0; t < mc_samples; ++t) {
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < spec.p; ++k) Xi(j, k) = rng.normal();
    if (L.size() > 0) Xi = Xi * L.transpose();
    Vector utility = Xi * spec.beta0.coords();
    if (spec.error_law != ErrorLaw::Noiseless)
      for (int j = 0; j < m; ++j) utility[j] += spec.sigma * rng.normal();
    int chosen = 0;
    for (int j = 1; j < m; ++j)
      if (utility[j] > utility[chosen]) chosen = j;
    const Vector v = Xi * beta.coords();
    long hits = 0;
    for (int k = 0; k < m; ++k)
      if (k != chosen && v[chosen] > v[k]) ++hits;
    const double g = static_cast<double>(hits) / (static_cast<double>(m) * (m - 1));
    sum += g;
    sumsq += g * g;
  }
  return mc_from_moments(sum, sumsq, mc_samples);
}

}  // namespace maxscore
