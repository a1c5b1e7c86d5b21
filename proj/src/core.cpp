#include "maxscore/core.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace maxscore {

namespace {

double phi_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

constexpr std::uint64_t kSaltCovariates = 0x10;
constexpr std::uint64_t kSaltErrors = 0x11;
constexpr std::uint64_t kSaltLabels = 0x12;

}  // namespace

UnitVector::UnitVector(Vector coords) : coords_(std::move(coords)) {
  if (coords_.size() < 1) throw std::invalid_argument("UnitVector: dimension must be >= 1");
  if (std::abs(coords_.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("UnitVector: norm must be 1 within 1e-12");
}

UnitVector UnitVector::normalized(const Vector& v) {
  const double nrm = v.norm();
  if (!(nrm > 0.0)) throw std::invalid_argument("UnitVector: cannot normalize zero vector");
  return UnitVector(Vector(v / nrm));
}

void BinaryDataset::validate() const {
  if (X.rows() != y.size())
    throw std::invalid_argument("BinaryDataset: row count of X must equal length of y");
  for (Eigen::Index i = 0; i < y.size(); ++i)
    if (y[i] != 1.0 && y[i] != -1.0)
      throw std::invalid_argument("BinaryDataset: labels must be exactly -1 or +1");
}

void MultinomialDataset::validate() const {
  if (m() < 2) throw std::invalid_argument("MultinomialDataset: m must be >= 2");
  if (static_cast<Eigen::Index>(X.size()) != n())
    throw std::invalid_argument("MultinomialDataset: X and Y row counts differ");
  for (Eigen::Index i = 0; i < n(); ++i) {
    if (X[i].rows() != m() || X[i].cols() != p())
      throw std::invalid_argument("MultinomialDataset: inconsistent covariate shapes");
    double s = 0.0;
    for (Eigen::Index j = 0; j < m(); ++j) {
      if (Y(i, j) != 0.0 && Y(i, j) != 1.0)
        throw std::invalid_argument("MultinomialDataset: Y entries must be 0/1");
      s += Y(i, j);
    }
    if (s != 1.0) throw std::invalid_argument("MultinomialDataset: each row of Y must sum to 1");
  }
}

void DgpSpec::validate() const {
  if (p < 1) throw std::invalid_argument("DgpSpec.p: must be >= 1");
  if (beta0.dim() != p) throw std::invalid_argument("DgpSpec.beta0: dimension must equal p");
  if (covariate_law == CovariateLaw::Ar1Gaussian && !(std::abs(rho) < 1.0))
    throw std::invalid_argument("DgpSpec.rho: must satisfy |rho| < 1");
  if (error_law == ErrorLaw::Gaussian && !(sigma > 0.0))
    throw std::invalid_argument("DgpSpec.sigma: must be > 0");
  if (error_law == ErrorLaw::MinimaxFamily) {
    if (!(delta > 0.0 && delta < 0.25))
      throw std::invalid_argument("DgpSpec.delta: must lie in (0, 1/4)");
    if (!(C > 0.0 && C <= 1.0)) throw std::invalid_argument("DgpSpec.C: must lie in (0, 1]");
  }
}

double eta_from_index(const DgpSpec& spec, double z) {
  switch (spec.error_law) {
    case ErrorLaw::Gaussian:
      return phi_cdf(z / spec.sigma);
    case ErrorLaw::HeteroscedasticGaussian:
      return phi_cdf(z / heteroscedastic_sigma(z));
    case ErrorLaw::Noiseless:
      return z >= 0.0 ? 1.0 : 0.0;
    default:
      throw std::invalid_argument("eta_from_index: law has no index-only closed form");
  }
}

// Piecewise conditional probability of the minimax families. The deviation
// from 1/2 is clamped at 1/4 so the formula stays a valid probability for
// every C in (0, 1]; the clamp only binds outside the margin range t < 1/4.
static double minimax_eta(const DgpSpec& spec, const Vector& x) {
  const double z = spec.beta0.coords().dot(x);
  const double x1 = std::abs(x[0]);
  double inner_threshold, outer_dev;
  if (spec.minimax_kind == MinimaxKind::Sparse) {
    const double m = std::sqrt(1.0 + spec.delta * spec.delta);
    inner_threshold = std::min(std::max(spec.C * spec.delta, x1 / (2.0 * m)), 0.25);
    outer_dev = std::min(std::max(spec.delta, x1 / (2.0 * spec.C * m)), 0.25);
  } else {
    const double eps_sqrt_p = spec.delta * std::sqrt(static_cast<double>(spec.p));
    const double m = std::sqrt(1.0 + (spec.p - 1) * spec.delta * spec.delta);
    inner_threshold = std::min(std::max(spec.C * eps_sqrt_p, x1 / (2.0 * m)), 0.25);
    outer_dev = std::min(std::max(eps_sqrt_p, x1 / (2.0 * spec.C * m)), 0.25);
  }
  double dev = std::abs(z) <= inner_threshold ? z / spec.C : outer_dev * sgn(z);
  dev = std::clamp(dev, -0.25, 0.25);
  return 0.5 + dev;
}

double dgp_eta(const DgpSpec& spec, const Vector& x) {
  if (spec.error_law == ErrorLaw::MinimaxFamily) return minimax_eta(spec, x);
  double z;
  if (spec.intercept) {
    if (x.size() != spec.p + 1)
      throw std::invalid_argument("dgp_eta: intercept spec expects augmented x");
    z = *spec.intercept * x[0] + spec.beta0.coords().dot(x.tail(spec.p));
  } else {
    z = spec.beta0.coords().dot(x);
  }
  return eta_from_index(spec, z);
}

UnitVector sample_unit_sphere(int p, Rng& rng) {
  if (p < 1) throw std::invalid_argument("sample_unit_sphere: p must be >= 1");
  Vector v(p);
  double nrm2;
  do {
    for (int i = 0; i < p; ++i) v[i] = rng.normal();
    nrm2 = v.squaredNorm();
  } while (!(nrm2 > 0.0));
  return UnitVector(Vector(v / std::sqrt(nrm2)));
}

UnitVector sample_unit_sphere(int p, const SeedSpec& seed) {
  Rng rng(seed);
  return sample_unit_sphere(p, rng);
}

Matrix ar1_covariance(int p, double rho) {
  if (!(std::abs(rho) < 1.0)) throw std::invalid_argument("ar1_covariance: |rho| must be < 1");
  if (p < 1) throw std::invalid_argument("ar1_covariance: p must be >= 1");
  Matrix sigma(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) sigma(i, j) = std::pow(rho, std::abs(i - j));
  return sigma;
}

Matrix cholesky_with_ridge(const Matrix& sigma) {
  Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  Matrix ridged = sigma + 1e-12 * Matrix::Identity(sigma.rows(), sigma.cols());
  Eigen::LLT<Matrix> llt2(ridged);
  if (llt2.info() != Eigen::Success)
    throw std::runtime_error("cholesky_with_ridge: matrix not positive definite");
  return llt2.matrixL();
}

static Matrix draw_covariates(const DgpSpec& spec, long n, Rng& rng) {
  Matrix X(n, spec.p);
  for (long i = 0; i < n; ++i)
    for (int j = 0; j < spec.p; ++j) X(i, j) = rng.normal();
  if (spec.covariate_law == CovariateLaw::Ar1Gaussian) {
    const Matrix L = cholesky_with_ridge(ar1_covariance(spec.p, spec.rho));
    X = X * L.transpose();
  }
  return X;
}

BinaryDataset generate_binary_dataset(const DgpSpec& spec, long n, const SeedSpec& seed) {
  spec.validate();
  if (n < 1) throw std::invalid_argument("generate_binary_dataset: n must be >= 1");

  Rng cov_rng(seed, kSaltCovariates);
  Matrix X = draw_covariates(spec, n, cov_rng);
  const Vector index = X * spec.beta0.coords();

  BinaryDataset out;
  out.y.resize(n);
  Rng err_rng(seed, kSaltErrors);
  Rng lab_rng(seed, kSaltLabels);
  for (long i = 0; i < n; ++i) {
    const double z = spec.intercept ? index[i] + *spec.intercept : index[i];
    switch (spec.error_law) {
      case ErrorLaw::Gaussian:
        out.y[i] = sgn(z + spec.sigma * err_rng.normal());
        break;
      case ErrorLaw::HeteroscedasticGaussian:
        out.y[i] = sgn(z + heteroscedastic_sigma(z) * err_rng.normal());
        break;
      case ErrorLaw::Noiseless:
        out.y[i] = sgn(z);
        break;
      case ErrorLaw::MinimaxFamily: {
        const double eta = minimax_eta(spec, X.row(i).transpose());
        out.y[i] = lab_rng.uniform01() < eta ? 1.0 : -1.0;
        break;
      }
    }
  }

  if (spec.intercept) {
    Matrix augmented(n, spec.p + 1);
    augmented.col(0).setOnes();
    augmented.rightCols(spec.p) = X;
    out.X = std::move(augmented);
  } else {
    out.X = std::move(X);
  }
  return out;
}

MultinomialDataset generate_multinomial_dataset(const DgpSpec& spec, long n, int m,
                                                const SeedSpec& seed) {
  spec.validate();
  if (m < 2) throw std::invalid_argument("generate_multinomial_dataset: m must be >= 2");
  if (n < 1) throw std::invalid_argument("generate_multinomial_dataset: n must be >= 1");
  if (spec.error_law == ErrorLaw::MinimaxFamily)
    throw std::invalid_argument("generate_multinomial_dataset: minimax family is binary-only");

  Rng cov_rng(seed, kSaltCovariates);
  Rng err_rng(seed, kSaltErrors);
  MultinomialDataset out;
  out.X.reserve(n);
  out.Y = Matrix::Zero(n, m);
  const Matrix L = spec.covariate_law == CovariateLaw::Ar1Gaussian
                       ? cholesky_with_ridge(ar1_covariance(spec.p, spec.rho))
                       : Matrix();
  for (long i = 0; i < n; ++i) {
    Matrix Xi(m, spec.p);
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < spec.p; ++k) Xi(j, k) = cov_rng.normal();
    if (L.size() > 0) Xi = Xi * L.transpose();
    Vector utility = Xi * spec.beta0.coords();
    if (spec.error_law != ErrorLaw::Noiseless)
      for (int j = 0; j < m; ++j) utility[j] += spec.sigma * err_rng.normal();
    // argmax with ties broken toward the lowest index
    int best = 0;
    for (int j = 1; j < m; ++j)
      if (utility[j] > utility[best]) best = j;
    out.Y(i, best) = 1.0;
    out.X.push_back(std::move(Xi));
  }
  return out;
}

UnitVector make_moderate_beta0(int p, Rng& rng) {
  Vector v(p);
  for (int i = 0; i < p; ++i) v[i] = rng.uniform(1.0, 2.0);
  return UnitVector::normalized(v);
}

UnitVector make_sparse_beta0(int p, int s0, Rng& rng, std::vector<int>* support_out) {
  if (s0 < 1 || s0 > p) throw std::invalid_argument("make_sparse_beta0: need 1 <= s0 <= p");
  // Fisher-Yates prefix for the active positions, uniform without replacement.
  std::vector<int> idx(p);
  for (int i = 0; i < p; ++i) idx[i] = i;
  for (int i = 0; i < s0; ++i) {
    const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(p - i)));
    std::swap(idx[i], idx[j]);
  }
  std::vector<int> support(idx.begin(), idx.begin() + s0);
  std::sort(support.begin(), support.end());
  Vector v = Vector::Zero(p);
  for (int j : support) v[j] = rng.uniform(2.0, 3.0);
  if (support_out) *support_out = support;
  return UnitVector::normalized(v);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_binary_csv(const BinaryDataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_binary_csv: cannot open " + path);
  for (Eigen::Index j = 0; j < data.p(); ++j) out << "x" << (j + 1) << ",";
  out << "y\n";
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    for (Eigen::Index j = 0; j < data.p(); ++j) out << format_double(data.X(i, j)) << ",";
    out << (data.y[i] > 0 ? "1" : "-1") << "\n";
  }
}

BinaryDataset read_binary_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_binary_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_binary_csv: empty file " + path);
  Eigen::Index p = static_cast<Eigen::Index>(std::count(line.begin(), line.end(), ','));
  if (p < 1) throw std::runtime_error("read_binary_csv: header must be x1,...,xp,y");
  std::vector<double> xs;
  std::vector<double> ys;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    Eigen::Index col = 0;
    for (; std::getline(ss, cell, ','); ++col) {
      const double v = std::stod(cell);
      if (col < p)
        xs.push_back(v);
      else
        ys.push_back(v);
    }
    if (col != p + 1) throw std::runtime_error("read_binary_csv: ragged row in " + path);
  }
  BinaryDataset data;
  const Eigen::Index n = static_cast<Eigen::Index>(ys.size());
  data.X.resize(n, p);
  data.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) data.X(i, j) = xs[i * p + j];
    data.y[i] = ys[i];
  }
  data.validate();
  return data;
}

std::string DgpSpec::to_json() const {
  nlohmann::json j;
  j["p"] = p;
  j["beta0"] = std::vector<double>(beta0.coords().data(), beta0.coords().data() + p);
  j["covariate_law"] =
      covariate_law == CovariateLaw::IsotropicGaussian ? "isotropic-gaussian" : "ar1-gaussian";
  if (covariate_law == CovariateLaw::Ar1Gaussian) j["rho"] = rho;
  switch (error_law) {
    case ErrorLaw::Gaussian:
      j["error_law"] = sigma == 1.0 ? "standard-gaussian" : "gaussian";
      if (sigma != 1.0) j["sigma"] = sigma;
      break;
    case ErrorLaw::HeteroscedasticGaussian:
      j["error_law"] = "heteroscedastic-gaussian";
      break;
    case ErrorLaw::MinimaxFamily:
      j["error_law"] = "minimax-family";
      j["delta"] = delta;
      j["C"] = C;
      j["family"] = minimax_kind == MinimaxKind::Sparse ? "sparse" : "moderate";
      break;
    case ErrorLaw::Noiseless:
      j["error_law"] = "noiseless";
      break;
  }
  if (intercept) j["intercept"] = *intercept;
  return j.dump(2);
}

DgpSpec DgpSpec::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  DgpSpec spec;
  if (!j.contains("p")) throw std::invalid_argument("DgpSpec: missing key 'p'");
  spec.p = j.at("p").get<int>();
  if (!j.contains("beta0")) throw std::invalid_argument("DgpSpec: missing key 'beta0'");
  const auto b = j.at("beta0").get<std::vector<double>>();
  spec.beta0 = UnitVector(Eigen::Map<const Vector>(b.data(), static_cast<Eigen::Index>(b.size())));
  const std::string cov = j.value("covariate_law", "isotropic-gaussian");
  if (cov == "isotropic-gaussian") {
    spec.covariate_law = CovariateLaw::IsotropicGaussian;
  } else if (cov == "ar1-gaussian") {
    spec.covariate_law = CovariateLaw::Ar1Gaussian;
    if (!j.contains("rho")) throw std::invalid_argument("DgpSpec: ar1-gaussian requires key 'rho'");
    spec.rho = j.at("rho").get<double>();
  } else {
    throw std::invalid_argument("DgpSpec: unknown covariate_law '" + cov + "'");
  }
  const std::string err = j.value("error_law", "standard-gaussian");
  if (err == "standard-gaussian") {
    spec.error_law = ErrorLaw::Gaussian;
    spec.sigma = 1.0;
  } else if (err == "gaussian") {
    spec.error_law = ErrorLaw::Gaussian;
    spec.sigma = j.value("sigma", 1.0);
  } else if (err == "heteroscedastic-gaussian") {
    spec.error_law = ErrorLaw::HeteroscedasticGaussian;
  } else if (err == "minimax-family") {
    spec.error_law = ErrorLaw::MinimaxFamily;
    if (!j.contains("delta")) throw std::invalid_argument("DgpSpec: minimax-family requires 'delta'");
    spec.delta = j.at("delta").get<double>();
    spec.C = j.value("C", 1.0);
    const std::string fam = j.value("family", "sparse");
    if (fam == "sparse")
      spec.minimax_kind = MinimaxKind::Sparse;
    else if (fam == "moderate")
      spec.minimax_kind = MinimaxKind::Moderate;
    else
      throw std::invalid_argument("DgpSpec: unknown family '" + fam + "'");
  } else if (err == "noiseless") {
    spec.error_law = ErrorLaw::Noiseless;
  } else {
    throw std::invalid_argument("DgpSpec: unknown error_law '" + err + "'");
  }
  if (j.contains("intercept")) spec.intercept = j.at("intercept").get<double>();
  spec.validate();
  return spec;
}

}  // namespace maxscore
