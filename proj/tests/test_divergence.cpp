#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "betafact/divergence.hpp"
#include "betafact/rng.hpp"

#include <cmath>
#include <vector>

using namespace betafact;

namespace {

const std::vector<double> kGrid = {0.1, 0.5, 1.0, 2.0, 3.7, 5.0, 10.0};
const std::vector<double> kBetaGrid = {-0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 2.4};

// Independent finite-difference oracle for the gradient in x.
double central_difference(double y, double x, Beta beta, double step = 1e-6) {
  return (beta_divergence(y, x + step, beta) - beta_divergence(y, x - step, beta)) /
         (2.0 * step);
}

}  // namespace

TEST_CASE("identity case y = x vanishes for every beta") {
  for (double b : {0.0, 0.5, 1.0, 1.5, 2.0})
    for (double v : kGrid)
      CHECK(beta_divergence(v, v, Beta{b}) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("closed forms at beta = 2, 1, 0") {
  CHECK(beta_divergence(3.0, 1.0, Beta{2.0}) == doctest::Approx(2.0));
  // Hand-evaluated KL branch: 2 ln 2 - 2 + 1.
  CHECK(beta_divergence(2.0, 1.0, Beta{1.0}) ==
        doctest::Approx(2.0 * std::log(2.0) - 1.0).epsilon(1e-14));
  // Hand-evaluated IS branch: 2/1 - ln 2 - 1.
  CHECK(beta_divergence(2.0, 1.0, Beta{0.0}) ==
        doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("generic branch agrees with the closed forms") {
  // The beta = 2 closed form is also the generic rational form.
  const double y = 3.4, x = 1.7;
  const double generic =
      (std::pow(y, 2.0) + std::pow(x, 2.0) - 2.0 * y * x) / 2.0;
  CHECK(beta_divergence(y, x, Beta{2.0}) == doctest::Approx(generic).epsilon(1e-14));
}

TEST_CASE("nonnegativity with equality only on the diagonal") {
  for (double b : kBetaGrid)
    for (double y : kGrid)
      for (double x : kGrid) {
        const double d = beta_divergence(y, x, Beta{b});
        CHECK(d >= 0.0);
        if (y != x) CHECK(d > 0.0);
      }
}

TEST_CASE("branch continuity at beta near 1 and 0") {
  for (double y : kGrid)
    for (double x : kGrid) {
      const double at_one = beta_divergence(y, x, Beta{1.0});
      CHECK(std::abs(beta_divergence(y, x, Beta{1.0 + 1e-8}) - at_one) <= 1e-6);
      CHECK(std::abs(beta_divergence(y, x, Beta{1.0 - 1e-8}) - at_one) <= 1e-6);
      const double at_zero = beta_divergence(y, x, Beta{0.0});
      CHECK(std::abs(beta_divergence(y, x, Beta{1e-8}) - at_zero) <= 1e-6);
      CHECK(std::abs(beta_divergence(y, x, Beta{-1e-8}) - at_zero) <= 1e-6);
    }
}

TEST_CASE("y = 0 conventions") {
  // beta in (0, 1]: the conventional limit x^beta / beta (d = x at beta 1).
  CHECK(beta_divergence(0.0, 2.0, Beta{1.0}) == doctest::Approx(2.0));
  CHECK(beta_divergence(0.0, 2.0, Beta{0.5}) ==
        doctest::Approx(std::pow(2.0, 0.5) / 0.5).epsilon(1e-14));
  // beta <= 0 rejects zero data.
  CHECK_THROWS_AS(beta_divergence(0.0, 2.0, Beta{0.0}), std::domain_error);
  CHECK_THROWS_AS(beta_divergence(0.0, 2.0, Beta{-0.5}), std::domain_error);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(beta_divergence(1.0, 0.0, Beta{2.0}), std::domain_error);
  CHECK_THROWS_AS(beta_divergence(1.0, -1.0, Beta{1.0}), std::domain_error);
  CHECK_THROWS_AS(beta_divergence(-0.1, 1.0, Beta{2.0}), std::domain_error);
  CHECK_THROWS_AS(beta_divergence_gradient(1.0, 0.0, Beta{1.0}), std::domain_error);
}

TEST_CASE("matrix aggregate") {
  SUBCASE("zero at equality") {
    Matrix y(2, 3);
    y << 1.0, 2.0, 3.0, 4.0, 5.0, 6.0;
    for (double b : {0.0, 1.0, 1.7, 2.0})
      CHECK(beta_divergence(y, y, Beta{b}) == doctest::Approx(0.0));
  }
  SUBCASE("single entry") {
    Matrix y(1, 1), x(1, 1);
    y << 3.0;
    x << 1.0;
    CHECK(beta_divergence(y, x, Beta{2.0}) == doctest::Approx(2.0));
  }
  SUBCASE("beta 2 equals half squared Frobenius distance") {
    Rng rng(7);
    Matrix y(4, 5), x(4, 5);
    for (Index c = 0; c < 5; ++c)
      for (Index r = 0; r < 4; ++r) {
        y(r, c) = 0.1 + rng.uniform(4.0);
        x(r, c) = 0.1 + rng.uniform(4.0);
      }
    // Independent Frobenius computation.
    double frobenius = 0.0;
    for (Index c = 0; c < 5; ++c)
      for (Index r = 0; r < 4; ++r) {
        const double diff = y(r, c) - x(r, c);
        frobenius += diff * diff;
      }
    const double d = beta_divergence(y, x, Beta{2.0});
    CHECK(std::abs(d - 0.5 * frobenius) <= 1e-12 * std::abs(d));
  }
  SUBCASE("shape mismatch") {
    CHECK_THROWS_AS(beta_divergence(Matrix::Ones(2, 2), Matrix::Ones(2, 3), Beta{2.0}),
                    std::invalid_argument);
  }
}

TEST_CASE("gradient split") {
  SUBCASE("minimum at x = y") {
    const auto g = beta_divergence_gradient(1.0, 1.0, Beta{2.0});
    CHECK(g.plus == doctest::Approx(1.0));
    CHECK(g.minus == doctest::Approx(1.0));
  }
  SUBCASE("hand-evaluated KL gradient") {
    const auto g = beta_divergence_gradient(2.0, 1.0, Beta{1.0});
    CHECK(g.plus == doctest::Approx(1.0));
    CHECK(g.minus == doctest::Approx(2.0));
  }
  SUBCASE("both parts nonnegative") {
    for (double b : kBetaGrid)
      for (double y : kGrid)
        for (double x : kGrid) {
          const auto g = beta_divergence_gradient(y, x, Beta{b});
          CHECK(g.plus >= 0.0);
          CHECK(g.minus >= 0.0);
        }
  }
  SUBCASE("matches central finite differences on the grid") {
    for (double b : kBetaGrid)
      for (double y : kGrid)
        for (double x : kGrid) {
          const auto g = beta_divergence_gradient(y, x, Beta{b});
          const double analytic = g.plus - g.minus;
          const double numeric = central_difference(y, x, Beta{b});
          const double scale = std::max({1.0, std::abs(analytic), std::abs(numeric)});
          CHECK(std::abs(analytic - numeric) / scale <= 1e-5);
        }
  }
}

TEST_CASE("convexity in x over beta in [1, 2]") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const double b = 1.0 + rng.uniform();
    const double y = 0.1 + rng.uniform(5.0);
    const double x1 = 0.1 + rng.uniform(5.0);
    const double x2 = 0.1 + rng.uniform(5.0);
    const double midpoint = beta_divergence(y, 0.5 * (x1 + x2), Beta{b});
    const double chord = 0.5 * beta_divergence(y, x1, Beta{b}) +
                         0.5 * beta_divergence(y, x2, Beta{b});
    CHECK(midpoint <= chord + 1e-12);
  }
}

TEST_CASE("elementwise_pow fast paths agree with std::pow") {
  Rng rng(3);
  Matrix m(3, 4);
  for (Index c = 0; c < 4; ++c)
    for (Index r = 0; r < 3; ++r) m(r, c) = 0.2 + rng.uniform(3.0);
  for (double e : {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 1.4}) {
    const Matrix p = elementwise_pow(m, e);
    for (Index c = 0; c < 4; ++c)
      for (Index r = 0; r < 3; ++r)
        CHECK(p(r, c) == doctest::Approx(std::pow(m(r, c), e)).epsilon(1e-13));
  }
}
