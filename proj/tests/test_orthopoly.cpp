#include "doctest.h"

#include "rmtdec/error.hpp"
#include "rmtdec/orthopoly.hpp"

#include <cmath>
#include <numbers>

using namespace rmtdec;

namespace {

Measure hermite() {
  return Measure::on_line([](double x) { return -x * x; }, -kInf, kInf, "hermite");
}

Measure legendre() {
  return Measure::on_line([](double) { return 0.0; }, -1.0, 1.0, "legendre");
}

}  // namespace

TEST_CASE("Hermite recurrence coefficients") {
  const auto sys = OrthoSystem::build(hermite(), 12);
  CHECK(sys.mass() == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-13));
  for (int j = 0; j < 12; ++j) CHECK(std::abs(sys.recur_a()[j]) < 1e-12);
  for (int j = 1; j <= 12; ++j) CHECK(sys.recur_b()[j] == doctest::Approx(std::sqrt(j / 2.0)).epsilon(1e-12));
}

TEST_CASE("Legendre p1 and Gram on the full interval") {
  const auto sys = OrthoSystem::build(legendre(), 6);
  CHECK(sys.eval(1, 0.4) == doctest::Approx(std::sqrt(1.5) * 0.4).epsilon(1e-12));
  CHECK(sys.eval(0, 0.9) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-13));
  const Matrix g = gram(sys, {-1.0, 1.0}, {0, 1, 2, 3, 4, 5, 6});
  CHECK((g - Matrix::Identity(7, 7)).cwiseAbs().maxCoeff() < 1e-12);
  // Half interval, closed form: integral_0^1 (3/2) x^2 = 1/2.
  const Matrix h = gram(sys, {0.0, 1.0}, {1});
  CHECK(h(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  const Matrix e = gram(sys, {0.5, 0.5}, {1, 2});
  CHECK(e.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Cauchy weight against monomial Gram-Schmidt") {
  // (1+x^2)^-4: moments of x^(2j) are finite up to j = 3.
  const auto m = Measure::on_line([](double x) { return -4.0 * std::log1p(x * x); }, -kInf, kInf, "c3");
  const auto sys = OrthoSystem::build(m, 3);
  // Oracle: mu_{2j} = B(j+1/2, 4-j-1/2).
  auto mu = [](int k) {
    if (k % 2) return 0.0;
    const double j = k / 2;
    return std::exp(std::lgamma(j + 0.5) + std::lgamma(3.5 - j) - std::lgamma(4.0));
  };
  CHECK(sys.mass() == doctest::Approx(mu(0)).epsilon(1e-12));
  // p2 ~ x^2 - mu2/mu0, norm^2 = mu4 - mu2^2/mu0.
  const double c = mu(2) / mu(0);
  const double n2 = mu(4) - mu(2) * mu(2) / mu(0);
  for (double x : {0.0, 0.7, 2.5})
    CHECK(sys.eval(2, x) == doctest::Approx((x * x - c) / std::sqrt(n2)).epsilon(1e-10));
  // Degree 4 would need mu_8, which diverges.
  try {
    OrthoSystem::build(m, 4);
    FAIL("expected MomentDivergence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MomentDivergence);
  }
}

TEST_CASE("squared chart: half-line Gauss gives generalised Laguerre") {
  // x^(2mu) e^{-x^2} on (0, inf) in y = x^2 is y^(mu-1/2) e^{-y} dy / 2.
  const double mu = 1.0;
  const auto m = Measure::squared([&](double x) { return 2.0 * mu * std::log(x) - x * x; }, 0.0, kInf, "lag");
  const auto sys = OrthoSystem::build(m, 8);
  const double alpha = mu - 0.5;
  for (int j = 0; j < 8; ++j) CHECK(sys.recur_a()[j] == doctest::Approx(2.0 * j + alpha + 1.0).epsilon(1e-11));
  for (int j = 1; j <= 8; ++j)
    CHECK(sys.recur_b()[j] == doctest::Approx(std::sqrt(j * (j + alpha))).epsilon(1e-11));
  const Matrix g = gram(sys, {0.0, kInf}, {0, 3, 8});
  CHECK((g - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-11);
  // Sub-interval Gram in y is positive definite with eigenvalues in (0, 1).
  const Matrix h = gram(sys, {0.0, 2.0}, {0, 1, 2, 3});
  const auto eig = sym_eigen(h);
  CHECK(eig.values.minCoeff() > 0.0);
  CHECK(eig.values.maxCoeff() < 1.0);
}

TEST_CASE("gram is additive over adjacent intervals") {
  const auto sys = OrthoSystem::build(hermite(), 6);
  const std::vector<int> idx{0, 1, 2, 3, 4, 5, 6};
  const Matrix a = gram(sys, {-kInf, -0.3}, idx);
  const Matrix b = gram(sys, {-0.3, 1.7}, idx);
  const Matrix c = gram(sys, {1.7, kInf}, idx);
  CHECK((a + b + c - Matrix::Identity(7, 7)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("invalid inputs") {
  CHECK_THROWS_AS(Measure::on_line([](double) { return 0.0; }, 1.0, 0.0), Error);
  CHECK_THROWS_AS(OrthoSystem::build(legendre(), 41), Error);
  const auto sys = OrthoSystem::build(legendre(), 2);
  CHECK_THROWS_AS(sys.eval(3, 0.0), Error);
  CHECK_THROWS_AS(gram(sys, {0.0, 1.0}, {5}), Error);
}
