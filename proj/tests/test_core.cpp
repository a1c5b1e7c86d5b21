#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "maxscore/core.hpp"

using namespace maxscore;

namespace {

double phi_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("sgn follows the +1 tie convention") {
  CHECK(sgn(3.7) == 1.0);
  CHECK(sgn(-0.2) == -1.0);
  CHECK(sgn(0.0) == 1.0);
  CHECK(sgn(-0.0) == 1.0);
  CHECK_THROWS_AS(sgn(std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(sgn(std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST_CASE("UnitVector validates norm and dimension") {
  Vector v(2);
  v << 3.0, 4.0;
  CHECK_THROWS_AS(UnitVector{v}, std::invalid_argument);
  const UnitVector u = UnitVector::normalized(v);
  CHECK(u[0] == doctest::Approx(0.6));
  CHECK(u[1] == doctest::Approx(0.8));
  CHECK_THROWS_AS(UnitVector{Vector()}, std::invalid_argument);
  CHECK_THROWS_AS(UnitVector::normalized(Vector::Zero(3)), std::invalid_argument);
}

TEST_CASE("sample_unit_sphere") {
  SUBCASE("p=1 gives only the two signs") {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const UnitVector u = sample_unit_sphere(1, SeedSpec{s, 0});
      CHECK(std::abs(u[0]) == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
  SUBCASE("norm is 1 within 1e-12") {
    const UnitVector u = sample_unit_sphere(3, SeedSpec{42, 1});
    CHECK(std::abs(u.coords().norm() - 1.0) <= 1e-12);
  }
  SUBCASE("p=0 rejected") {
    Rng rng(SeedSpec{1, 1});
    CHECK_THROWS_AS(sample_unit_sphere(0, rng), std::invalid_argument);
  }
  SUBCASE("first coordinate is centered (CLT bound, variance 1/2)") {
    // uniform on the circle: E X1 = 0, Var X1 = 1/2
    Rng rng(SeedSpec{7, 0});
    const long draws = 100000;
    double mean = 0.0;
    for (long i = 0; i < draws; ++i) mean += sample_unit_sphere(2, rng)[0];
    mean /= draws;
    CHECK(std::abs(mean) <= 3.0 / std::sqrt(draws * 0.5));
  }
}

TEST_CASE("ar1_covariance") {
  const Matrix s2 = ar1_covariance(2, 0.5);
  CHECK(s2(0, 0) == 1.0);
  CHECK(s2(0, 1) == 0.5);
  CHECK(s2(1, 0) == 0.5);
  CHECK(ar1_covariance(3, 0.0).isIdentity(0.0));
  CHECK(ar1_covariance(3, 0.5)(0, 2) == doctest::Approx(0.25));
  CHECK_THROWS_AS(ar1_covariance(3, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ar1_covariance(3, -1.2), std::invalid_argument);
  // positive definite: Cholesky succeeds without the ridge
  CHECK_NOTHROW(cholesky_with_ridge(ar1_covariance(20, 0.9)));
}

TEST_CASE("generate_binary_dataset") {
  DgpSpec spec;
  spec.p = 3;
  spec.beta0 = UnitVector::normalized((Vector(3) << 1, 1, 1).finished());

  SUBCASE("noiseless labels equal sgn(x' beta0)") {
    spec.error_law = ErrorLaw::Noiseless;
    const BinaryDataset data = generate_binary_dataset(spec, 200, {3, 0});
    for (Eigen::Index i = 0; i < data.n(); ++i)
      CHECK(data.y[i] == sgn(data.X.row(i).dot(spec.beta0.coords())));
  }

  SUBCASE("heteroscedastic sigma is 1 on the unit slab") {
    CHECK(heteroscedastic_sigma(0.3) == 1.0);
    CHECK(heteroscedastic_sigma(-0.4) == 1.0);
    CHECK(heteroscedastic_sigma(4.0) == doctest::Approx(2.0));
  }

  SUBCASE("empirical P(Y=1|index near 0.5) matches Phi(0.5)") {
    spec.error_law = ErrorLaw::HeteroscedasticGaussian;
    const BinaryDataset data = generate_binary_dataset(spec, 100000, {11, 5});
    const Vector z = data.X * spec.beta0.coords();
    long in_slab = 0, positive = 0;
    for (Eigen::Index i = 0; i < data.n(); ++i)
      if (z[i] >= 0.49 && z[i] <= 0.51) {
        ++in_slab;
        if (data.y[i] > 0) ++positive;
      }
    REQUIRE(in_slab > 100);
    const double phat = static_cast<double>(positive) / in_slab;
    const double target = phi_cdf(0.5);
    const double se = std::sqrt(target * (1 - target) / in_slab);
    CHECK(std::abs(phat - target) <= 3 * se + 0.004);  // + slab curvature slack
  }

  SUBCASE("sign balance on the zero slab is 1/2") {
    spec.error_law = ErrorLaw::HeteroscedasticGaussian;
    const BinaryDataset data = generate_binary_dataset(spec, 100000, {13, 2});
    const Vector z = data.X * spec.beta0.coords();
    long in_slab = 0, positive = 0;
    for (Eigen::Index i = 0; i < data.n(); ++i)
      if (std::abs(z[i]) <= 0.01) {
        ++in_slab;
        if (data.y[i] > 0) ++positive;
      }
    REQUIRE(in_slab > 100);
    const double phat = static_cast<double>(positive) / in_slab;
    CHECK(std::abs(phat - 0.5) <= 3 * std::sqrt(0.25 / in_slab) + 0.004);
  }

  SUBCASE("intercept augments X with a leading 1 column") {
    spec.error_law = ErrorLaw::Noiseless;
    spec.intercept = 0.7;
    const BinaryDataset data = generate_binary_dataset(spec, 50, {5, 0});
    CHECK(data.p() == 4);
    CHECK((data.X.col(0).array() == 1.0).all());
    for (Eigen::Index i = 0; i < data.n(); ++i)
      CHECK(data.y[i] == sgn(0.7 + data.X.row(i).tail(3).dot(spec.beta0.coords())));
  }

  SUBCASE("invalid spec rejected") {
    spec.covariate_law = CovariateLaw::Ar1Gaussian;
    spec.rho = 1.5;
    CHECK_THROWS_AS(generate_binary_dataset(spec, 10, {1, 0}), std::invalid_argument);
  }
}

TEST_CASE("ar1 covariates reproduce the requested correlation") {
  DgpSpec spec;
  spec.p = 2;
  spec.beta0 = UnitVector::normalized((Vector(2) << 1, 0).finished());
  spec.covariate_law = CovariateLaw::Ar1Gaussian;
  spec.rho = 0.5;
  spec.error_law = ErrorLaw::Noiseless;
  const BinaryDataset data = generate_binary_dataset(spec, 200000, {17, 0});
  const double corr = (data.X.col(0).array() * data.X.col(1).array()).mean();
  CHECK(corr == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("generate_multinomial_dataset") {
  DgpSpec spec;
  spec.p = 3;
  spec.beta0 = UnitVector::normalized((Vector(3) << 2, 1, 1).finished());

  SUBCASE("one-hot rows and noiseless argmax") {
    spec.error_law = ErrorLaw::Noiseless;
    const MultinomialDataset data = generate_multinomial_dataset(spec, 300, 4, {21, 0});
    data.validate();
    for (Eigen::Index i = 0; i < data.n(); ++i) {
      const Vector u = data.X[i] * spec.beta0.coords();
      int best = 0;
      for (int j = 1; j < 4; ++j)
        if (u[j] > u[best]) best = j;
      CHECK(data.Y(i, best) == 1.0);
    }
  }

  SUBCASE("m < 2 rejected") {
    CHECK_THROWS_AS(generate_multinomial_dataset(spec, 10, 1, {1, 0}), std::invalid_argument);
  }

  SUBCASE("exchangeability: marginal choice frequencies are 1/m") {
    // (x_j, eps_j) iid across alternatives, so P(choose j) = 1/m by symmetry
    spec.error_law = ErrorLaw::Gaussian;
    const long n = 100000;
    const MultinomialDataset data = generate_multinomial_dataset(spec, n, 3, {23, 1});
    Vector counts = Vector::Zero(3);
    for (Eigen::Index i = 0; i < data.n(); ++i)
      for (int j = 0; j < 3; ++j) counts[j] += data.Y(i, j);
    counts /= static_cast<double>(n);
    const double se = std::sqrt(1.0 / 3 * 2.0 / 3 / n);
    for (int j = 0; j < 3; ++j) CHECK(std::abs(counts[j] - 1.0 / 3) <= 3 * se);
  }
}

TEST_CASE("seed reproducibility is byte exact") {
  DgpSpec spec;
  spec.p = 4;
  spec.beta0 = UnitVector::normalized((Vector(4) << 1, 2, 3, 4).finished());
  spec.covariate_law = CovariateLaw::Ar1Gaussian;
  spec.rho = 0.3;
  spec.error_law = ErrorLaw::HeteroscedasticGaussian;
  const BinaryDataset a = generate_binary_dataset(spec, 500, {99, 7});
  const BinaryDataset b = generate_binary_dataset(spec, 500, {99, 7});
  CHECK(std::memcmp(a.X.data(), b.X.data(), sizeof(double) * a.X.size()) == 0);
  CHECK(std::memcmp(a.y.data(), b.y.data(), sizeof(double) * a.y.size()) == 0);
  const BinaryDataset c = generate_binary_dataset(spec, 500, {99, 8});
  CHECK(std::memcmp(a.X.data(), c.X.data(), sizeof(double) * a.X.size()) != 0);
}

TEST_CASE("sparse beta0 generation") {
  Rng rng(SeedSpec{31, 0});
  std::vector<int> support;
  const UnitVector b = make_sparse_beta0(20, 3, rng, &support);
  CHECK(support.size() == 3);
  CHECK(std::abs(b.coords().norm() - 1.0) <= 1e-12);
  int nonzero = 0;
  for (int i = 0; i < 20; ++i)
    if (b[i] != 0.0) {
      ++nonzero;
      CHECK(std::find(support.begin(), support.end(), i) != support.end());
      CHECK(b[i] > 0.0);
    }
  CHECK(nonzero == 3);
  CHECK_THROWS_AS(make_sparse_beta0(5, 6, rng), std::invalid_argument);
}

TEST_CASE("dataset CSV round trip") {
  DgpSpec spec;
  spec.p = 3;
  spec.beta0 = UnitVector::normalized((Vector(3) << 1, -1, 2).finished());
  const BinaryDataset data = generate_binary_dataset(spec, 37, {55, 0});
  const std::string path = "core_roundtrip.csv";
  write_binary_csv(data, path);
  const std::string text = slurp(path);
  CHECK(text.rfind("x1,x2,x3,y\n", 0) == 0);
  CHECK(text.find("\r") == std::string::npos);
  const BinaryDataset back = read_binary_csv(path);
  REQUIRE(back.n() == data.n());
  REQUIRE(back.p() == data.p());
  CHECK((back.X - data.X).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.y - data.y).cwiseAbs().maxCoeff() == 0.0);
  std::filesystem::remove(path);
}

TEST_CASE("DgpSpec JSON round trip and bad keys") {
  DgpSpec spec;
  spec.p = 2;
  spec.beta0 = UnitVector::normalized((Vector(2) << 3, 4).finished());
  spec.covariate_law = CovariateLaw::Ar1Gaussian;
  spec.rho = 0.25;
  spec.error_law = ErrorLaw::MinimaxFamily;
  spec.delta = 0.1;
  spec.C = 0.5;
  const DgpSpec back = DgpSpec::from_json(spec.to_json());
  CHECK(back.p == 2);
  CHECK(back.rho == doctest::Approx(0.25));
  CHECK(back.delta == doctest::Approx(0.1));
  CHECK(back.C == doctest::Approx(0.5));
  CHECK(back.minimax_kind == MinimaxKind::Sparse);

  CHECK_THROWS_WITH_AS(DgpSpec::from_json("{\"p\": 2}"), doctest::Contains("beta0"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      DgpSpec::from_json("{\"p\":2,\"beta0\":[1,0],\"error_law\":\"cauchy\"}"),
      doctest::Contains("error_law"), std::invalid_argument);
}
