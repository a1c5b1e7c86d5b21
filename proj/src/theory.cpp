#include "maxscore/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace maxscore {

namespace {

constexpr std::uint64_t kSaltMargin = 0x50;
constexpr std::uint64_t kSaltNestedEta = 0x51;
constexpr std::uint64_t kSaltCap = 0x52;
constexpr std::uint64_t kSaltGv = 0x53;
constexpr std::uint64_t kSaltFamily = 0x54;
constexpr std::uint64_t kSaltChoiceProb = 0x55;
constexpr std::uint64_t kSaltRankOrder = 0x56;
constexpr std::uint64_t kSaltMultExcess = 0x57;

double binom_se(double phat, long n) { return std::sqrt(std::max(0.0, phat * (1 - phat)) / n); }

}  // namespace

std::string check_row_csv(const CheckRow& row) {
  std::ostringstream out;
  out << row.check << "," << row.params << "," << format_double(row.estimate) << ","
      << format_double(row.bound) << "," << format_double(row.stderr_) << ","
      << (row.pass ? "1" : "0");
  return out.str();
}

MarginEstimate transition_constant_estimate(const DgpSpec& spec, const std::vector<double>& t_grid,
                                            long mc_samples, const SeedSpec& seed,
                                            bool force_nested_mc, long inner_samples) {
  spec.validate();
  for (double t : t_grid)
    if (!(t > 0.0 && t < 0.5))
      throw std::invalid_argument("transition_constant_estimate: t_grid must lie in (0, 1/2)");
  if (mc_samples < 100)
    throw std::invalid_argument("transition_constant_estimate: mc_samples must be >= 100");

  Rng rng(seed, kSaltMargin);
  Rng inner_rng(seed, kSaltNestedEta);
  const Matrix L = spec.covariate_law == CovariateLaw::Ar1Gaussian
                       ? cholesky_with_ridge(ar1_covariance(spec.p, spec.rho))
                       : Matrix();
  std::vector<double> margins(mc_samples);
  Vector x(spec.p);
  for (long i = 0; i < mc_samples; ++i) {
    for (int j = 0; j < spec.p; ++j) x[j] = rng.normal();
    if (L.size() > 0) x = (L * x).eval();
    double eta;
    if (!force_nested_mc) {
      eta = dgp_eta(spec, x);
    } else {
      // nested-MC eta: resample the error at this x and count positive signs
      const double z = x.dot(spec.beta0.coords());
      long pos = 0;
      for (long k = 0; k < inner_samples; ++k) {
        double noise = 0.0;
        switch (spec.error_law) {
          case ErrorLaw::Gaussian: noise = spec.sigma * inner_rng.normal(); break;
          case ErrorLaw::HeteroscedasticGaussian:
            noise = heteroscedastic_sigma(z) * inner_rng.normal();
            break;
          case ErrorLaw::Noiseless: noise = 0.0; break;
          case ErrorLaw::MinimaxFamily:
            noise = inner_rng.uniform01() < dgp_eta(spec, x) ? 1e30 : -1e30;
            noise -= z;
            break;
        }
        if (z + noise >= 0.0) ++pos;
      }
      eta = static_cast<double>(pos) / inner_samples;
    }
    margins[i] = std::abs(eta - 0.5);
  }
  std::sort(margins.begin(), margins.end());

  MarginEstimate out;
  out.t_grid = t_grid;
  out.nested_mc_fallback = force_nested_mc;
  double st2 = 0.0, spt = 0.0;
  for (double t : t_grid) {
    const auto it = std::upper_bound(margins.begin(), margins.end(), t);
    const double phat = static_cast<double>(it - margins.begin()) / mc_samples;
    out.prob.push_back(phat);
    out.stderr_.push_back(binom_se(phat, mc_samples));
    st2 += t * t;
    spt += phat * t;
  }
  out.fitted_C = st2 > 0 ? spt / st2 : 0.0;
  return out;
}

CurvatureReport curvature_check(const DgpSpec& spec, const std::vector<UnitVector>& directions,
                                long mc_samples, const SeedSpec& seed, double t_star) {
  CurvatureReport report;
  report.t_star = t_star;
  const std::vector<double> t_grid = {0.025, 0.05, 0.075, 0.1, 0.15, 0.2};
  report.fitted_C =
      transition_constant_estimate(spec, t_grid, std::min<long>(mc_samples, 200000), seed)
          .fitted_C;
  for (std::size_t k = 0; k < directions.size(); ++k) {
    CurvatureEntry e;
    e.dist = (directions[k].coords() - spec.beta0.coords()).norm();
    e.excess = excess_risk_mc(spec, directions[k], mc_samples, {seed.master_seed, seed.stream_id + k});
    const double denom =
        report.fitted_C > 0
            ? std::min(e.dist * e.dist / report.fitted_C, 2.0 * t_star * e.dist)
            : 2.0 * t_star * e.dist;
    e.ratio = denom > 0 ? e.excess.value / denom : 0.0;
    e.violation = e.excess.value < -3.0 * e.excess.stderr_;
    if (e.violation) ++report.violations;
    report.entries.push_back(e);
  }
  return report;
}

CapCheck spherical_cap_bounds_check(int p, double r, long mc_samples, const SeedSpec& seed) {
  if (!(r > 0.0 && r <= 1.0))
    throw std::invalid_argument("spherical_cap_bounds_check: r must lie in (0, 1]");
  CapCheck out;
  out.lower = 0.5 * std::pow(r / 2.0, p - 1);
  out.upper = std::pow(r, p - 1) / (2.0 * std::sqrt(2.0));
  if (p < 8) {
    out.skipped = true;
    out.pass = true;
    return out;
  }
  // sigma(D(e1, r)) = P(Y_1 >= 1 - r^2/2) for Y uniform on S^{p-1}
  const double threshold = 1.0 - r * r / 2.0;
  Rng rng(seed, kSaltCap);
  long hits = 0;
  Vector y(p);
  for (long i = 0; i < mc_samples; ++i) {
    double nrm2 = 0.0;
    for (int j = 0; j < p; ++j) {
      y[j] = rng.normal();
      nrm2 += y[j] * y[j];
    }
    if (y[0] >= threshold * std::sqrt(nrm2)) ++hits;
  }
  out.estimate = static_cast<double>(hits) / mc_samples;
  out.stderr_ = binom_se(out.estimate, mc_samples);
  out.pass = out.estimate >= out.lower - 3.0 * out.stderr_ &&
             out.estimate <= out.upper + 3.0 * out.stderr_;
  return out;
}

double kl_bernoulli(double p1, double q1) {
  if (!(p1 >= 0.0 && p1 <= 1.0 && q1 >= 0.0 && q1 <= 1.0))
    throw std::invalid_argument("kl_bernoulli: arguments must lie in [0, 1]");
  const auto term = [](double a, double b) {
    if (a == 0.0) return 0.0;  // 0 log 0 = 0
    if (b == 0.0) return std::numeric_limits<double>::infinity();
    return a * std::log(a / b);
  };
  return term(p1, q1) + term(1.0 - p1, 1.0 - q1);
}

double hellinger_bernoulli(double p1, double p2) {
  if (!(p1 >= 0.0 && p1 <= 1.0 && p2 >= 0.0 && p2 <= 1.0))
    throw std::invalid_argument("hellinger_bernoulli: arguments must lie in [0, 1]");
  return 1.0 - std::sqrt(p1 * p2) - std::sqrt((1.0 - p1) * (1.0 - p2));
}

SweepCheck kl_bound_check(double grid_step) {
  SweepCheck out;
  out.worst_margin = std::numeric_limits<double>::infinity();
  for (double p1 = 0.0; p1 <= 1.0 + 1e-12; p1 += grid_step) {
    const double pp = std::min(p1, 1.0);
    for (double q1 = 0.25; q1 <= 0.75 + 1e-12; q1 += grid_step) {
      const double qq = std::min(q1, 0.75);
      const double kl = kl_bernoulli(pp, qq);
      const double bound = 16.0 / 3.0 * (pp - qq) * (pp - qq);
      ++out.points;
      out.worst_margin = std::min(out.worst_margin, bound - kl);
      if (kl > bound + 1e-12) ++out.violations;
    }
  }
  out.pass = out.violations == 0;
  return out;
}

SweepCheck hellinger_bound_check(double grid_step) {
  SweepCheck out;
  out.worst_margin = std::numeric_limits<double>::infinity();
  for (double p1 = 0.25; p1 <= 0.75 + 1e-12; p1 += grid_step) {
    const double pp = std::min(p1, 0.75);
    for (double p2 = 0.25; p2 <= 0.75 + 1e-12; p2 += grid_step) {
      const double qq = std::min(p2, 0.75);
      const double h2 = hellinger_bernoulli(pp, qq);
      const double nu = qq - pp;
      const double s = (pp + qq) / 2.0;
      const double bound = nu * nu / (4.0 * std::sqrt(3.0) * s * (1.0 - s));
      ++out.points;
      out.worst_margin = std::min(out.worst_margin, bound - h2);
      if (h2 > bound + 1e-12) ++out.violations;
    }
  }
  out.pass = out.violations == 0;
  return out;
}

long gv_target_cardinality(int d, int s) {
  return static_cast<long>(
      std::ceil(std::exp(s / 8.0 * std::log(1.0 + static_cast<double>(d) / (2.0 * s)))));
}

PackingSet gv_packing(int d, int s, long attempts, const SeedSpec& seed) {
  if (!(s >= 1 && s <= d / 8))
    throw std::invalid_argument("gv_packing: need 1 <= s <= d/8");
  const long target = gv_target_cardinality(d, s);
  Rng rng(seed, kSaltGv);
  PackingSet out;
  out.d = d;
  out.s = s;
  std::vector<int> idx(d);
  for (long attempt = 0; attempt < attempts && static_cast<long>(out.codewords.size()) < target;
       ++attempt) {
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < s; ++i) {
      const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(d - i)));
      std::swap(idx[i], idx[j]);
    }
    std::vector<std::uint8_t> w(d, 0);
    for (int i = 0; i < s; ++i) w[idx[i]] = 1;
    bool ok = true;
    for (const auto& v : out.codewords) {
      int dist = 0;
      for (int j = 0; j < d; ++j) dist += v[j] != w[j];
      if (dist < s / 2.0) {
        ok = false;
        break;
      }
    }
    if (ok) out.codewords.push_back(std::move(w));
  }
  if (static_cast<long>(out.codewords.size()) < target)
    throw std::runtime_error("gv_packing: attempt budget exhausted before reaching target " +
                             std::to_string(target) + "; retry with a new seed");
  out.min_pairwise_distance = d;
  for (std::size_t a = 0; a < out.codewords.size(); ++a)
    for (std::size_t b = a + 1; b < out.codewords.size(); ++b) {
      int dist = 0;
      for (int j = 0; j < d; ++j) dist += out.codewords[a][j] != out.codewords[b][j];
      out.min_pairwise_distance = std::min(out.min_pairwise_distance, dist);
    }
  if (out.codewords.size() < 2) out.min_pairwise_distance = d;
  return out;
}

double minimax_family_condprob(MinimaxKind kind, const UnitVector& beta, double C, double delta,
                               const Vector& x) {
  DgpSpec spec;
  spec.p = static_cast<int>(beta.dim());
  spec.beta0 = beta;
  spec.error_law = ErrorLaw::MinimaxFamily;
  spec.minimax_kind = kind;
  spec.delta = delta;
  spec.C = C;
  spec.validate();
  return dgp_eta(spec, x);
}

double minimax_kl_constant() {
  return 128.0 / 3.0 * std::sqrt(2.0 / M_PI) *
         (6.0 + std::sqrt(3.0) + 2.0 * (std::sqrt(3.0) + 6.0) / 27.0 +
          std::sqrt(M_PI) / (8.0 * std::sqrt(2.0)));
}

double minimax_margin_constant() { return 5.0 * std::sqrt(2.0 / M_PI); }

MinimaxFamily build_minimax_family_sparse(long n, int p, int s, double C, const SeedSpec& seed,
                                          int max_count) {
  if (p < 9) throw std::invalid_argument("build_minimax_family_sparse: p must be >= 9");
  const int d = p - 1;
  if (!(s >= 1 && s <= d / 8))
    throw std::invalid_argument("build_minimax_family_sparse: need 1 <= s <= (p-1)/8");
  const double delta =
      std::cbrt(s / 64.0 * std::log(static_cast<double>(p) / s) / (n * minimax_kl_constant())) *
      std::pow(C, 2.0 / 3.0);
  if (!(delta > 0.0 && delta < 0.25))
    throw std::invalid_argument("build_minimax_family_sparse: delta out of (0, 1/4); adjust n, p, s");

  const PackingSet packing = gv_packing(d, s, 2000000, {seed.master_seed, seed.stream_id});
  MinimaxFamily fam;
  fam.delta = delta;
  const double m_delta = std::sqrt(1.0 + delta * delta);
  const int count = std::min<int>(max_count, static_cast<int>(packing.codewords.size()));
  for (int j = 0; j < count; ++j) {
    Vector v(p);
    v[0] = 1.0;
    for (int k = 0; k < d; ++k) v[k + 1] = delta / std::sqrt(static_cast<double>(s)) *
                                           packing.codewords[j][k];
    v /= m_delta;
    fam.betas.push_back(UnitVector::normalized(v));
  }
  // packing display: ||beta_I - beta_J||^2 >= delta^2 / 4
  for (std::size_t a = 0; a < fam.betas.size(); ++a)
    for (std::size_t b = a + 1; b < fam.betas.size(); ++b)
      if ((fam.betas[a].coords() - fam.betas[b].coords()).squaredNorm() < delta * delta / 4.0)
        throw std::runtime_error("build_minimax_family_sparse: packing separation violated");
  for (const auto& beta : fam.betas) {
    DgpSpec spec;
    spec.p = p;
    spec.beta0 = beta;
    spec.covariate_law = CovariateLaw::IsotropicGaussian;
    spec.error_law = ErrorLaw::MinimaxFamily;
    spec.minimax_kind = MinimaxKind::Sparse;
    spec.delta = delta;
    spec.C = C;
    fam.specs.push_back(spec);
  }
  return fam;
}

MinimaxFamily build_minimax_family_moderate(long n, int p, double C, const SeedSpec& seed,
                                            int max_count) {
  if (p < 2) throw std::invalid_argument("build_minimax_family_moderate: p must be >= 2");
  const double zeta = 128.0 / (3.0 * std::sqrt(3.0)) * std::sqrt(2.0 / M_PI) * (1.0 + std::sqrt(3.0));
  const double eps = std::cbrt(1.0 / (2.0 * zeta)) * std::pow(static_cast<double>(n), -1.0 / 3.0) *
                     std::pow(static_cast<double>(p), -1.0 / 6.0) * std::pow(C, 2.0 / 3.0);
  MinimaxFamily fam;
  fam.delta = eps;
  const double m_eps = std::sqrt(1.0 + (p - 1) * eps * eps);
  Rng rng(seed, kSaltFamily);
  const bool enumerate_all = p - 1 <= 16 && (1L << (p - 1)) <= max_count;
  const long count = enumerate_all ? (1L << (p - 1)) : max_count;
  for (long j = 0; j < count; ++j) {
    Vector v(p);
    v[0] = 1.0;
    for (int k = 0; k < p - 1; ++k) {
      const bool bit = enumerate_all ? ((j >> k) & 1) : (rng.uniform01() < 0.5);
      v[k + 1] = (bit ? eps : -eps);
    }
    v /= m_eps;
    fam.betas.push_back(UnitVector::normalized(v));
  }
  for (const auto& beta : fam.betas) {
    DgpSpec spec;
    spec.p = p;
    spec.beta0 = beta;
    spec.covariate_law = CovariateLaw::IsotropicGaussian;
    spec.error_law = ErrorLaw::MinimaxFamily;
    spec.minimax_kind = MinimaxKind::Moderate;
    spec.delta = eps;
    spec.C = C;
    fam.specs.push_back(spec);
  }
  return fam;
}

Vector estimate_choice_probabilities(const Matrix& Xi, const UnitVector& beta0, double sigma,
                                     long inner_samples, const SeedSpec& seed) {
  const int m = static_cast<int>(Xi.rows());
  const Vector u = Xi * beta0.coords();
  Rng rng(seed, kSaltChoiceProb);
  Vector counts = Vector::Zero(m);
  for (long t = 0; t < inner_samples; ++t) {
    int best = 0;
    double best_u = u[0] + sigma * rng.normal();
    for (int j = 1; j < m; ++j) {
      const double uj = u[j] + sigma * rng.normal();
      if (uj > best_u) {
        best_u = uj;
        best = j;
      }
    }
    counts[best] += 1.0;
  }
  return counts / static_cast<double>(inner_samples);
}

RankOrderingReport rank_ordering_check(const DgpSpec& spec, int m, long n_matrices,
                                       long inner_samples, const SeedSpec& seed,
                                       double pass_threshold) {
  spec.validate();
  if (spec.error_law != ErrorLaw::Gaussian)
    throw std::invalid_argument("rank_ordering_check: requires iid Gaussian errors");
  Rng rng(seed, kSaltRankOrder);
  const Matrix L = spec.covariate_law == CovariateLaw::Ar1Gaussian
                       ? cholesky_with_ridge(ar1_covariance(spec.p, spec.rho))
                       : Matrix();
  RankOrderingReport report;
  for (long t = 0; t < n_matrices; ++t) {
    Matrix Xi(m, spec.p);
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < spec.p; ++k) Xi(j, k) = rng.normal();
    if (L.size() > 0) Xi = Xi * L.transpose();
    const Vector u = Xi * spec.beta0.coords();
    const Vector phat = estimate_choice_probabilities(Xi, spec.beta0, spec.sigma, inner_samples,
                                                      {seed.master_seed, seed.stream_id + 1 + t});
    for (int j = 0; j < m; ++j)
      for (int k = j + 1; k < m; ++k) {
        const double diff = phat[j] - phat[k];
        const double se =
            std::sqrt(std::max(0.0, phat[j] + phat[k] - diff * diff) / inner_samples);
        if (std::abs(diff) <= 3.0 * se) {
          ++report.inconclusive;
          continue;
        }
        const bool concordant = (diff > 0) == (u[j] > u[k]) || u[j] == u[k];
        if (concordant)
          ++report.concordant;
        else
          ++report.violations;
      }
  }
  const long decided = report.concordant + report.violations;
  report.concordance_rate = decided > 0 ? static_cast<double>(report.concordant) / decided : 1.0;
  report.pass = report.concordance_rate >= pass_threshold;
  return report;
}

McValue multinomial_excess_mc(const DgpSpec& spec, int m, const UnitVector& beta, long mc_samples,
                              const SeedSpec& seed) {
  spec.validate();
  if (m < 2) throw std::invalid_argument("multinomial_excess_mc: m must be >= 2");
  if (spec.error_law == ErrorLaw::MinimaxFamily)
    throw std::invalid_argument("multinomial_excess_mc: minimax family is binary-only");
  Rng rng(seed, kSaltMultExcess);
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
    // paired statistic: same draw scored at beta0 and at beta
    const Vector v0 = Xi * spec.beta0.coords();
    const Vector vb = Xi * beta.coords();
    long hits0 = 0, hitsb = 0;
    for (int k = 0; k < m; ++k) {
      if (k == chosen) continue;
      if (v0[chosen] > v0[k]) ++hits0;
      if (vb[chosen] > vb[k]) ++hitsb;
    }
    const double g = static_cast<double>(hits0 - hitsb) / (static_cast<double>(m) * (m - 1));
    sum += g;
    sumsq += g * g;
  }
  const double mean = sum / mc_samples;
  const double var = std::max(0.0, sumsq / mc_samples - mean * mean);
  return {mean, std::sqrt(var / mc_samples)};
}

UnitVector direction_at_distance(const UnitVector& beta0, const UnitVector& orth, double dist) {
  if (!(dist >= 0.0 && dist <= 2.0))
    throw std::invalid_argument("direction_at_distance: dist must lie in [0, 2]");
  const double theta = 2.0 * std::asin(dist / 2.0);
  Vector v = std::cos(theta) * beta0.coords() + std::sin(theta) * orth.coords();
  return UnitVector::normalized(v);
}

UnitVector orthogonal_direction(const UnitVector& beta0, const SeedSpec& seed) {
  Rng rng(seed, 0x58);
  const int p = static_cast<int>(beta0.dim());
  if (p < 2) throw std::invalid_argument("orthogonal_direction: p must be >= 2");
  for (;;) {
    Vector v = sample_unit_sphere(p, rng).coords();
    v -= v.dot(beta0.coords()) * beta0.coords();
    const double nrm = v.norm();
    if (nrm > 1e-8) return UnitVector::normalized(v);
  }
}

McValue gaussian_wedge_probability_mc(const UnitVector& b1, const UnitVector& b2, long mc_samples,
                                      const SeedSpec& seed) {
  if (b1.dim() != b2.dim())
    throw std::invalid_argument("gaussian_wedge_probability_mc: dimension mismatch");
  Rng rng(seed, 0x59);
  const int p = static_cast<int>(b1.dim());
  Vector x(p);
  long hits = 0;
  for (long t = 0; t < mc_samples; ++t) {
    for (int j = 0; j < p; ++j) x[j] = rng.normal();
    if (sgn(x.dot(b1.coords())) != sgn(x.dot(b2.coords()))) ++hits;
  }
  const double phat = static_cast<double>(hits) / mc_samples;
  return {phat, binom_se(phat, mc_samples)};
}

McValue minimax_pairwise_kl_mc(const DgpSpec& spec_i, const DgpSpec& spec_j, long mc_samples,
                               const SeedSpec& seed) {
  if (spec_i.p != spec_j.p)
    throw std::invalid_argument("minimax_pairwise_kl_mc: dimension mismatch");
  Rng rng(seed, 0x5A);
  Vector x(spec_i.p);
  double sum = 0.0, sumsq = 0.0;
  for (long t = 0; t < mc_samples; ++t) {
    for (int j = 0; j < spec_i.p; ++j) x[j] = rng.normal();
    const double g = kl_bernoulli(dgp_eta(spec_i, x), dgp_eta(spec_j, x));
    sum += g;
    sumsq += g * g;
  }
  const double mean = sum / mc_samples;
  const double var = std::max(0.0, sumsq / mc_samples - mean * mean);
  return {mean, std::sqrt(var / mc_samples)};
}

std::vector<MultinomialCurvatureEntry> multinomial_curvature_check(
    const DgpSpec& spec, int m, const std::vector<UnitVector>& directions, long mc_samples,
    const SeedSpec& seed) {
  std::vector<MultinomialCurvatureEntry> out;
  for (std::size_t k = 0; k < directions.size(); ++k) {
    MultinomialCurvatureEntry e;
    e.dist = (directions[k].coords() - spec.beta0.coords()).norm();
    e.excess =
        multinomial_excess_mc(spec, m, directions[k], mc_samples, {seed.master_seed, seed.stream_id + k});
    e.ratio = e.dist > 0 ? e.excess.value / (e.dist * e.dist) : 0.0;
    e.violation = e.excess.value < -3.0 * e.excess.stderr_;
    out.push_back(e);
  }
  return out;
}

}  // namespace maxscore
