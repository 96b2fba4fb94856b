#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "betafact/models.hpp"
#include "betafact/rng.hpp"

#include <cmath>

using namespace betafact;

namespace {

Factorization random_lmm_state(Index frames, int k, Index voxels, std::uint64_t seed) {
  Rng rng(seed);
  Factorization state;
  state.factors.tacs.resize(frames, k);
  for (Index c = 0; c < k; ++c)
    for (Index r = 0; r < frames; ++r) state.factors.tacs(r, c) = 0.1 + rng.uniform(2.0);
  state.proportions.weights.resize(k, voxels);
  for (Index n = 0; n < voxels; ++n) {
    for (int r = 0; r < k; ++r) state.proportions.weights(r, n) = 0.05 + rng.uniform();
    state.proportions.weights.col(n) /= state.proportions.weights.col(n).sum();
  }
  return state;
}

}  // namespace

TEST_CASE("evaluate_model NMF/LMM") {
  SUBCASE("all-ones rank-1 product") {
    FactorSet factors{Matrix::Ones(4, 1), false};
    ProportionMatrix proportions{Matrix::Ones(1, 5)};
    const Matrix x = evaluate_model(factors, proportions, std::nullopt);
    CHECK(x.rows() == 4);
    CHECK(x.cols() == 5);
    CHECK((x.array() == 1.0).all());
  }
  SUBCASE("shape mismatch throws") {
    FactorSet factors{Matrix::Ones(4, 2), false};
    ProportionMatrix proportions{Matrix::Ones(3, 5)};
    CHECK_THROWS_AS(evaluate_model(factors, proportions, std::nullopt),
                    std::invalid_argument);
  }
}

TEST_CASE("evaluate_model SLMM") {
  FactorSet factors{Matrix::Identity(2, 2), false};
  Matrix a(2, 2);
  a << 0.5, 1.0, 0.5, 0.0;
  ProportionMatrix proportions{a};
  VariabilitySet vb;
  vb.basis.resize(2, 1);
  vb.basis << 1.0, 2.0;
  vb.coefficients.resize(1, 2);
  vb.coefficients << 0.1, 0.0;

  SUBCASE("hand-expanded 2x2 instance") {
    const Matrix x = evaluate_model(factors, proportions, vb);
    Matrix expected = factors.tacs * a;
    expected(0, 0) += 0.05;   // a_11 * v_1 * b_1 = 0.5 * 1 * 0.1
    expected(1, 0) += 0.10;   // a_11 * v_2 * b_1 = 0.5 * 2 * 0.1
    CHECK((x - expected).cwiseAbs().maxCoeff() <= 1e-15);
  }
  SUBCASE("zero coefficients reduce to the plain linear mix exactly") {
    vb.coefficients.setZero();
    const Matrix with = evaluate_model(factors, proportions, vb);
    const Matrix without = evaluate_model(factors, proportions, std::nullopt);
    CHECK((with - without).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("objective") {
  SUBCASE("zero at an exact fit") {
    auto state = random_lmm_state(5, 3, 7, 21);
    DataMatrix data{evaluate_model(state), std::nullopt};
    CHECK(objective(data, {ModelKind::Lmm, Beta{1.5}, 0.0}, state) ==
          doctest::Approx(0.0));
  }
  SUBCASE("l2,1 penalty by hand: columns (3,4) and (0,0) at lambda 2") {
    Matrix b(2, 2);
    b << 3.0, 0.0, 4.0, 0.0;
    CHECK(l21_norm(b) == doctest::Approx(5.0));

    Factorization state = random_lmm_state(4, 2, 2, 3);
    VariabilitySet vb;
    vb.basis = Matrix::Zero(4, 2);
    vb.coefficients = b;
    state.variability = vb;
    DataMatrix data{evaluate_model(state), std::nullopt};
    const double with_penalty =
        objective(data, {ModelKind::Slmm, Beta{2.0}, 2.0}, state);
    CHECK(with_penalty == doctest::Approx(10.0));
  }
  SUBCASE("beta 2 objective equals half squared Frobenius error") {
    auto state = random_lmm_state(6, 2, 9, 5);
    Rng rng(17);
    DataMatrix data{evaluate_model(state), std::nullopt};
    for (Index n = 0; n < data.values.cols(); ++n)
      for (Index l = 0; l < data.values.rows(); ++l)
        data.values(l, n) += rng.uniform(0.2);
    const double j = objective(data, {ModelKind::Lmm, Beta{2.0}, 0.0}, state);
    const double frobenius = (data.values - evaluate_model(state)).squaredNorm();
    CHECK(std::abs(j - 0.5 * frobenius) <= 1e-12 * j);
  }
  SUBCASE("label-switching symmetry for k >= 2") {
    auto state = random_lmm_state(6, 4, 9, 9);
    DataMatrix data{evaluate_model(state), std::nullopt};
    Rng rng(23);
    for (Index n = 0; n < data.values.cols(); ++n)
      for (Index l = 0; l < data.values.rows(); ++l)
        data.values(l, n) += rng.uniform(0.3);

    Factorization permuted = state;
    permuted.factors.tacs.col(1).swap(permuted.factors.tacs.col(3));
    permuted.proportions.weights.row(1).swap(permuted.proportions.weights.row(3));
    for (double b : {0.0, 1.0, 1.5, 2.0}) {
      const double original = objective(data, {ModelKind::Lmm, Beta{b}, 0.0}, state);
      const double swapped = objective(data, {ModelKind::Lmm, Beta{b}, 0.0}, permuted);
      CHECK(std::abs(original - swapped) <= 1e-12 * std::abs(original));
    }
  }
}

TEST_CASE("check_constraints") {
  auto state = random_lmm_state(5, 3, 6, 31);
  const ModelSpec lmm{ModelKind::Lmm, Beta{2.0}, 0.0};

  SUBCASE("valid LMM state") { CHECK(check_constraints(lmm, state).empty()); }

  SUBCASE("column summing to 0.9 reports a 0.1 deviation") {
    state.proportions.weights.col(2) *= 0.9;
    const auto violations = check_constraints(lmm, state);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].kind == ConstraintViolation::Kind::SumToOne);
    CHECK(violations[0].col == 2);
    CHECK(violations[0].magnitude == doctest::Approx(0.1));
  }

  SUBCASE("NMF ignores sum-to-one") {
    state.proportions.weights.col(2) *= 0.9;
    CHECK(check_constraints({ModelKind::Nmf, Beta{2.0}, 0.0}, state).empty());
  }

  SUBCASE("negative coefficient entry reported") {
    VariabilitySet vb;
    vb.basis = Matrix::Ones(5, 2);
    vb.coefficients = Matrix::Ones(2, 6);
    vb.coefficients(1, 4) = -0.25;
    state.variability = vb;
    const auto violations =
        check_constraints({ModelKind::Slmm, Beta{2.0}, 0.1}, state);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].kind == ConstraintViolation::Kind::NegativeCoefficient);
    CHECK(violations[0].row == 1);
    CHECK(violations[0].col == 4);
    CHECK(violations[0].magnitude == doctest::Approx(0.25));
  }

  SUBCASE("structural mismatch throws") {
    CHECK_THROWS_AS(check_constraints({ModelKind::Slmm, Beta{2.0}, 0.0}, state),
                    std::invalid_argument);
  }
}
