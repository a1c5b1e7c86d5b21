#include <cmath>
#include <functional>

#include "doctest.h"
#include "maxscore/score.hpp"

using namespace maxscore;

namespace {

UnitVector unit2(double a, double b) {
  return UnitVector::normalized((Vector(2) << a, b).finished());
}

BinaryDataset three_point_example() {
  BinaryDataset data;
  data.X.resize(3, 2);
  data.X << 1, 0, 0, 1, 1, 1;
  data.y.resize(3);
  data.y << 1, -1, 1;
  return data;
}

// test-side oracle: composite Simpson over z ~ N(0,1)
double simpson_normal(const std::function<double(double)>& f) {
  const int segments = 8000;
  const double lo = -10.0, hi = 10.0, h = (hi - lo) / segments;
  const auto g = [&](double z) {
    return f(z) * std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
  };
  double acc = g(lo) + g(hi);
  for (int k = 1; k < segments; ++k) acc += (k % 2 ? 4.0 : 2.0) * g(lo + k * h);
  return acc * h / 3.0;
}

double phi_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

DgpSpec reference_spec(int p, std::uint64_t seed_tag) {
  DgpSpec spec;
  spec.p = p;
  spec.beta0 = sample_unit_sphere(p, SeedSpec{seed_tag, 0});
  spec.error_law = ErrorLaw::Gaussian;
  return spec;
}

}  // namespace

TEST_CASE("empirical score hand examples") {
  BinaryDataset one;
  one.X.resize(1, 2);
  one.X << 1, 0;
  one.y.resize(1);
  one.y << 1;
  CHECK(empirical_score(one, unit2(1, 0)) == 1.0);
  CHECK(empirical_score(one, unit2(-1, 0)) == -1.0);

  const BinaryDataset data = three_point_example();
  CHECK(empirical_score(data, unit2(1, 0)) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(empirical_risk(data, unit2(1, 0)) == doctest::Approx(1.0 / 3).epsilon(1e-15));

  CHECK_THROWS_AS(empirical_score(data, UnitVector::normalized(Vector::Ones(3))),
                  std::invalid_argument);
}

TEST_CASE("affine identity is exact at the bit level") {
  Rng rng(SeedSpec{101, 0});
  for (int rep = 0; rep < 300; ++rep) {
    const int n = 1 + static_cast<int>(rng.below(200));
    const int p = 1 + static_cast<int>(rng.below(20));
    BinaryDataset data;
    data.X.resize(n, p);
    data.y.resize(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < p; ++j) data.X(i, j) = rng.normal();
      data.y[i] = rng.uniform01() < 0.5 ? 1.0 : -1.0;
    }
    const UnitVector beta = sample_unit_sphere(p, rng);
    CHECK(empirical_score(data, beta) == 1.0 - 2.0 * empirical_risk(data, beta));
  }
}

TEST_CASE("antisymmetry on zero-free data") {
  Rng rng(SeedSpec{102, 0});
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 40, p = 4;
    BinaryDataset data;
    data.X.resize(n, p);
    data.y.resize(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < p; ++j) data.X(i, j) = rng.normal();
      data.y[i] = rng.uniform01() < 0.5 ? 1.0 : -1.0;
    }
    const UnitVector beta = sample_unit_sphere(p, rng);
    if ((data.X * beta.coords()).cwiseAbs().minCoeff() == 0.0) continue;
    // the affine identity owns bit-exactness; the sign flip is exact up to
    // one rounding of k/n vs (n-k)/n
    CHECK(empirical_score(data, -beta) ==
          doctest::Approx(-empirical_score(data, beta)).epsilon(1e-14));
  }
}

TEST_CASE("multinomial score") {
  DgpSpec spec;
  spec.p = 3;
  spec.beta0 = UnitVector::normalized((Vector(3) << 1, 2, -1).finished());
  spec.error_law = ErrorLaw::Noiseless;

  SUBCASE("noiseless m=2 data scores 1/2 at beta0") {
    const MultinomialDataset data = generate_multinomial_dataset(spec, 128, 2, {7, 0});
    CHECK(multinomial_score(data, spec.beta0) == 0.5);
  }

  SUBCASE("identical covariate rows give score 0") {
    MultinomialDataset data = generate_multinomial_dataset(spec, 16, 3, {8, 0});
    for (auto& Xi : data.X)
      for (int j = 1; j < 3; ++j) Xi.row(j) = Xi.row(0);
    CHECK(multinomial_score(data, spec.beta0) == 0.0);
  }

  SUBCASE("m=2 reduction to the binary score (dyadic n keeps it exact)") {
    spec.error_law = ErrorLaw::Gaussian;
    Rng rng(SeedSpec{9, 0});
    for (std::uint64_t rep = 0; rep < 20; ++rep) {
      const MultinomialDataset data = generate_multinomial_dataset(spec, 128, 2, {10, rep});
      const BinaryDataset binary = binary_from_multinomial_pair(data);
      for (int b = 0; b < 5; ++b) {
        const UnitVector beta = sample_unit_sphere(3, rng);
        if ((binary.X * beta.coords()).cwiseAbs().minCoeff() == 0.0) continue;
        CHECK(multinomial_score(data, beta) == (1.0 + empirical_score(binary, beta)) / 4.0);
      }
    }
  }
}

TEST_CASE("population score MC against the quadrature oracle") {
  const DgpSpec spec = reference_spec(4, 201);

  SUBCASE("at beta0 the oracle gives E|2 Phi(Z) - 1| = 1/2") {
    const double oracle =
        simpson_normal([](double z) { return std::abs(2.0 * phi_cdf(z) - 1.0); });
    CHECK(oracle == doctest::Approx(0.5).epsilon(1e-8));
    const McValue mc = population_score_mc(spec, spec.beta0, 200000, {11, 0});
    CHECK(std::abs(mc.value - oracle) <= 3.0 * mc.stderr_);
    CHECK(population_score_reference(spec, spec.beta0) == doctest::Approx(oracle).epsilon(1e-7));
  }

  SUBCASE("arbitrary beta matches the bivariate quadrature oracle") {
    const UnitVector beta = sample_unit_sphere(4, SeedSpec{202, 0});
    const double r = beta.dot(spec.beta0);
    REQUIRE(std::abs(r) < 0.999);
    const double oracle = simpson_normal([&](double z) {
      const double a = 2.0 * phi_cdf(z) - 1.0;
      const double b = 2.0 * phi_cdf(r * z / std::sqrt(1.0 - r * r)) - 1.0;
      return a * b;
    });
    const McValue mc = population_score_mc(spec, beta, 200000, {12, 0});
    CHECK(std::abs(mc.value - oracle) <= 3.0 * mc.stderr_ + 1e-4);
    CHECK(population_score_reference(spec, beta) == doctest::Approx(oracle).epsilon(1e-6));
  }

  SUBCASE("huge noise drives the score to zero") {
    DgpSpec noisy = spec;
    noisy.sigma = 1000.0;
    const McValue mc = population_score_mc(noisy, noisy.beta0, 100000, {13, 0});
    CHECK(std::abs(mc.value) <= 3.0 * mc.stderr_ + 1e-3);
    CHECK(mc.value <= 1.0);
    CHECK(mc.value >= -1.0);
  }

  SUBCASE("mc_samples floor enforced") {
    CHECK_THROWS_AS(population_score_mc(spec, spec.beta0, 10, {1, 0}), std::invalid_argument);
  }
}

TEST_CASE("gaussian wedge probability") {
  const UnitVector e1 = unit2(1, 0), e2 = unit2(0, 1);
  CHECK(gaussian_wedge_probability(e1, e1) == 0.0);
  CHECK(gaussian_wedge_probability(e1, e2) == doctest::Approx(0.5));
  CHECK(gaussian_wedge_probability(e1, unit2(-1, 0)) == doctest::Approx(1.0));

  SUBCASE("inner product 1/2 gives exactly 1/3") {
    Vector a = Vector::Zero(10), b = Vector::Zero(10);
    a[0] = 1.0;
    b[0] = 0.5;
    b[1] = std::sqrt(0.75);
    CHECK(gaussian_wedge_probability(UnitVector(a), UnitVector::normalized(b)) ==
          doctest::Approx(1.0 / 3).epsilon(1e-12));
  }

  SUBCASE("symmetry and metric compatibility") {
    Rng rng(SeedSpec{301, 0});
    for (int rep = 0; rep < 30; ++rep) {
      const UnitVector a = sample_unit_sphere(5, rng);
      const UnitVector b = sample_unit_sphere(5, rng);
      const UnitVector c = sample_unit_sphere(5, rng);
      const double ab = gaussian_wedge_probability(a, b);
      CHECK(ab == gaussian_wedge_probability(b, a));
      CHECK(ab >= 0.0);
      // spherical angles obey the triangle inequality
      CHECK(gaussian_wedge_probability(a, c) <= ab + gaussian_wedge_probability(b, c) + 1e-12);
    }
  }

  SUBCASE("wedge lower bound arccos(1 - d^2/2)/pi >= d/pi") {
    for (double d = 0.01; d <= 2.0; d += 0.01) {
      const double lhs = std::acos(std::clamp(1.0 - d * d / 2.0, -1.0, 1.0)) / M_PI;
      CHECK(lhs + 1e-12 >= d / M_PI);
    }
  }
}

TEST_CASE("excess risk MC") {
  const DgpSpec spec = reference_spec(4, 401);

  SUBCASE("zero at beta0") {
    const McValue mc = excess_risk_mc(spec, spec.beta0, 50000, {1, 0});
    CHECK(mc.value == 0.0);
  }

  SUBCASE("antipode of a noiseless model doubles the score") {
    DgpSpec pure = spec;
    pure.error_law = ErrorLaw::Noiseless;
    const McValue mc = excess_risk_mc(pure, -pure.beta0, 50000, {2, 0});
    // noiseless S(beta0) = 1, S(-beta0) = -1
    CHECK(mc.value == doctest::Approx(2.0).epsilon(1e-12));
  }

  SUBCASE("agrees with the population-score difference route") {
    Rng rng(SeedSpec{402, 0});
    Vector orth = sample_unit_sphere(4, rng).coords();
    orth -= orth.dot(spec.beta0.coords()) * spec.beta0.coords();
    orth.normalize();
    const double theta = 2.0 * std::asin(0.1);
    const UnitVector beta = UnitVector::normalized(
        std::cos(theta) * spec.beta0.coords() + std::sin(theta) * orth);
    CHECK((beta.coords() - spec.beta0.coords()).norm() == doctest::Approx(0.2).epsilon(1e-12));

    const McValue direct = excess_risk_mc(spec, beta, 400000, {3, 0});
    const McValue s0 = population_score_mc(spec, spec.beta0, 400000, {4, 0});
    const McValue sb = population_score_mc(spec, beta, 400000, {5, 0});
    const double diff = s0.value - sb.value;
    const double se = std::sqrt(direct.stderr_ * direct.stderr_ + s0.stderr_ * s0.stderr_ +
                                sb.stderr_ * sb.stderr_);
    CHECK(std::abs(direct.value - diff) <= 3.0 * se);
    CHECK(direct.value >= -3.0 * direct.stderr_);
  }
}

TEST_CASE("smoothed score") {
  const BinaryDataset data = three_point_example();

  SUBCASE("beta = 0 gives 0") {
    CHECK(smoothed_score(data, Vector::Zero(2), 3.0) == 0.0);
  }

  SUBCASE("xi -> infinity approaches the empirical score on tie-free directions") {
    const UnitVector beta = unit2(2, -1);
    const Vector z = data.X * beta.coords();
    const double min_abs = z.cwiseAbs().minCoeff();
    REQUIRE(min_abs > 0);
    const double xi = 1e4;
    const double gap =
        std::abs(smoothed_score(data, beta.coords(), xi) - empirical_score(data, beta));
    CHECK(gap <= 2.0 * std::exp(-xi * min_abs));
  }

  SUBCASE("xi <= 0 rejected") {
    CHECK_THROWS_AS(smoothed_score(data, Vector::Ones(2), 0.0), std::invalid_argument);
  }

  SUBCASE("gradient matches central finite differences") {
    Rng rng(SeedSpec{501, 0});
    for (int rep = 0; rep < 20; ++rep) {
      const int n = 10 + static_cast<int>(rng.below(40));
      const int p = 2 + static_cast<int>(rng.below(4));
      BinaryDataset d;
      d.X.resize(n, p);
      d.y.resize(n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < p; ++j) d.X(i, j) = rng.normal();
        d.y[i] = rng.uniform01() < 0.5 ? 1.0 : -1.0;
      }
      const Vector beta = sample_unit_sphere(p, rng).coords();
      const double xi = rng.uniform(0.5, 4.0);
      const Vector grad = smoothed_score_gradient(d, beta, xi);
      const double h = 1e-5;
      double max_err = 0.0;
      for (int j = 0; j < p; ++j) {
        Vector lo = beta, hi = beta;
        lo[j] -= h;
        hi[j] += h;
        const double fd = (smoothed_score(d, hi, xi) - smoothed_score(d, lo, xi)) / (2 * h);
        max_err = std::max(max_err, std::abs(fd - grad[j]));
      }
      CHECK(max_err <= 1e-6);
    }
  }
}

TEST_CASE("multinomial population score MC prefers beta0") {
  DgpSpec spec;
  spec.p = 3;
  spec.beta0 = sample_unit_sphere(3, SeedSpec{601, 0});
  spec.error_law = ErrorLaw::Gaussian;
  const McValue at_beta0 = multinomial_population_score_mc(spec, 3, spec.beta0, 50000, {1, 0});
  CHECK(at_beta0.value > 0.0);
  CHECK(at_beta0.value <= 1.0);
  const UnitVector other = sample_unit_sphere(3, SeedSpec{602, 0});
  const McValue at_other = multinomial_population_score_mc(spec, 3, other, 50000, {1, 0});
  CHECK(at_beta0.value >= at_other.value - 3.0 * (at_beta0.stderr_ + at_other.stderr_));
}
