#pragma once

// Domain types, sign conventions and data generation for the binary and
// multinomial discrete choice models.

#include <Eigen/Core>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "maxscore/rng.hpp"

namespace maxscore {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// sgn with the fixed tie convention sgn(0) = +1.
inline double sgn(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("sgn: non-finite input");
  return x >= 0.0 ? 1.0 : -1.0;
}

// A direction on the unit sphere S^{p-1}. Construction validates the norm;
// use normalized() to project an arbitrary nonzero vector.
class UnitVector {
 public:
  UnitVector() : coords_(Vector::Ones(1)) {}  // the +1 direction in R^1
  explicit UnitVector(Vector coords);
  static UnitVector normalized(const Vector& v);

  const Vector& coords() const { return coords_; }
  Eigen::Index dim() const { return coords_.size(); }
  double operator[](Eigen::Index i) const { return coords_[i]; }
  double dot(const UnitVector& o) const { return coords_.dot(o.coords_); }
  UnitVector operator-() const { return UnitVector(Vector(-coords_)); }

 private:
  Vector coords_;
};

struct BinaryDataset {
  Matrix X;  // n x p
  Vector y;  // entries in {-1, +1}

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index p() const { return X.cols(); }
  void validate() const;
};

struct MultinomialDataset {
  std::vector<Matrix> X;  // n individuals, each m x p
  Matrix Y;               // n x m one-hot choice indicators

  Eigen::Index n() const { return Y.rows(); }
  Eigen::Index m() const { return Y.cols(); }
  Eigen::Index p() const { return X.empty() ? 0 : X.front().cols(); }
  void validate() const;
};

enum class CovariateLaw { IsotropicGaussian, Ar1Gaussian };
enum class ErrorLaw { Gaussian, HeteroscedasticGaussian, MinimaxFamily, Noiseless };
enum class MinimaxKind { Sparse, Moderate };

// Full description of a data-generating process.
struct DgpSpec {
  int p = 0;
  UnitVector beta0;
  CovariateLaw covariate_law = CovariateLaw::IsotropicGaussian;
  double rho = 0.0;           // Ar1Gaussian only, |rho| < 1
  ErrorLaw error_law = ErrorLaw::Gaussian;
  double sigma = 1.0;         // Gaussian only
  double delta = 0.0;         // MinimaxFamily: delta (sparse) or epsilon (moderate)
  double C = 1.0;             // MinimaxFamily: in (0, 1]
  MinimaxKind minimax_kind = MinimaxKind::Sparse;
  std::optional<double> intercept;  // augments X with a leading 1 column

  void validate() const;  // throws std::invalid_argument naming the bad field

  std::string to_json() const;
  static DgpSpec from_json(const std::string& text);
};

// sigma_i = sqrt(1 v |x_i' beta0|) for the heteroscedastic DGP.
inline double heteroscedastic_sigma(double z) { return std::sqrt(std::max(1.0, std::abs(z))); }

// P(Y = 1 | index = z) for DGPs with an analytic conditional class
// probability. For the minimax family the index alone is not enough; use
// dgp_eta below. Throws for laws without a closed form at this signature.
double eta_from_index(const DgpSpec& spec, double z);

// P(Y = 1 | X = x) for any spec in this library; x must already carry the
// intercept column when spec.intercept is set.
double dgp_eta(const DgpSpec& spec, const Vector& x);

UnitVector sample_unit_sphere(int p, Rng& rng);
UnitVector sample_unit_sphere(int p, const SeedSpec& seed);

// AR(1) covariance: Sigma_ii = 1, Sigma_ij = rho^|i-j|.
Matrix ar1_covariance(int p, double rho);

// Lower Cholesky factor of an SPD matrix; retries once with a 1e-12 ridge.
Matrix cholesky_with_ridge(const Matrix& sigma);

BinaryDataset generate_binary_dataset(const DgpSpec& spec, long n, const SeedSpec& seed);
MultinomialDataset generate_multinomial_dataset(const DgpSpec& spec, long n, int m,
                                                const SeedSpec& seed);

// beta0 generators used by the simulation studies: entries Unif(1,2)
// normalized (moderate regime); s0 active entries Unif(2,3) at positions
// drawn uniformly without replacement, normalized (sparse regime).
UnitVector make_moderate_beta0(int p, Rng& rng);
UnitVector make_sparse_beta0(int p, int s0, Rng& rng, std::vector<int>* support_out = nullptr);

// CSV with header x1,...,xp,y and 17-significant-digit values.
void write_binary_csv(const BinaryDataset& data, const std::string& path);
BinaryDataset read_binary_csv(const std::string& path);

std::string format_double(double v);  // %.17g with '.' decimal separator

}  // namespace maxscore
