#include "doctest.h"

#include "rmtdec/error.hpp"
#include "rmtdec/numerics.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace rmtdec;

TEST_CASE("integrate: classical values") {
  CHECK(integrate([](double x) { return x; }, 0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(integrate([](double x) { return std::exp(-x * x); }, -kInf, kInf) ==
        doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));
  CHECK(integrate([](double x) { return 0.5 * std::exp(-0.5 * x * x); }, -kInf, kInf) ==
        doctest::Approx(std::sqrt(0.5 * std::numbers::pi)).epsilon(1e-12));
  // Cauchy tail through the same tan substitution.
  CHECK(integrate([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, kInf) ==
        doctest::Approx(0.5 * std::numbers::pi).epsilon(1e-12));
  // Odd integrand: relative target unreachable, round-off floor ends refinement.
  CHECK(std::abs(integrate([](double x) { return x * std::exp(-x * x); }, -kInf, kInf)) < 1e-14);
}

TEST_CASE("integrate: error paths") {
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 1.0, 1.0), Error);
  try {
    integrate([](double) { return 1.0; }, 2.0, 1.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidInterval);
  }
  IntegrationOptions opts;
  opts.max_depth = 3;
  opts.rel_tol = 1e-14;
  try {
    integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, opts);
    FAIL("expected NonConvergence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonConvergence);
  }
}

TEST_CASE("quadrature rules integrate constants to the interval length") {
  for (int n : {1, 2, 5, 16, 40}) {
    const QuadratureRule r = gauss_legendre(n, -0.3, 2.7);
    double s = 0.0;
    for (double w : r.weights) {
      CHECK(w > 0.0);
      s += w;
    }
    CHECK(s == doctest::Approx(3.0).epsilon(1e-13));
  }
  const QuadratureRule c = composite_gauss_legendre(7, 9, 1.0, 4.5);
  CHECK(c.apply([](double) { return 1.0; }) == doctest::Approx(3.5).epsilon(1e-13));
  // 16-point rule is exact for degree 31.
  const QuadratureRule g = gauss_legendre(16, 0.0, 1.0);
  CHECK(g.apply([](double x) { return std::pow(x, 31); }) == doctest::Approx(1.0 / 32.0).epsilon(1e-13));
}

TEST_CASE("sym_eigen examples") {
  auto e = sym_eigen(Matrix::Identity(3, 3));
  for (int i = 0; i < 3; ++i) CHECK(e.values(i) == doctest::Approx(1.0));

  Matrix d(2, 2);
  d << 2, 0, 0, -1;
  e = sym_eigen(d);
  CHECK(e.values(0) == doctest::Approx(-1.0));
  CHECK(e.values(1) == doctest::Approx(2.0));
  CHECK(std::abs(e.vectors(1, 0)) == doctest::Approx(1.0));

  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  e = sym_eigen(x);
  CHECK(e.values(0) == doctest::Approx(-1.0));
  CHECK(e.values(1) == doctest::Approx(1.0));

  Matrix bad(2, 2);
  bad << 0, 1, 0.5, 0;
  CHECK_THROWS_AS(sym_eigen(bad), Error);
}

TEST_CASE("sym_eigen: residuals and invariance under orthogonal similarity") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 6;
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = z(rng);
    Matrix m = a + a.transpose();
    const auto e = sym_eigen(m);
    const double norm = m.norm();
    for (int j = 0; j < n; ++j)
      CHECK((m * e.vectors.col(j) - e.values(j) * e.vectors.col(j)).norm() <= 1e-10 * norm);
    CHECK((e.vectors.transpose() * e.vectors - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);

    Matrix g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = z(rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix rotated = q * m * q.transpose();
    rotated = 0.5 * (rotated + rotated.transpose());
    const auto e2 = sym_eigen(rotated);
    CHECK((e.values - e2.values).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, norm));
  }
}

TEST_CASE("poly_from_samples examples") {
  {
    const std::vector<double> nodes{0, 1, 2}, vals{0, 1, 4};
    const auto p = poly_from_samples(nodes, vals);
    REQUIRE(p.coeffs.size() == 3);
    CHECK(std::abs(p.coeffs[0]) < 1e-14);
    CHECK(std::abs(p.coeffs[1]) < 1e-14);
    CHECK(p.coeffs[2] == doctest::Approx(1.0));
  }
  {
    const std::vector<double> nodes{-1, 0.5, 3}, vals{1, 1, 1};
    const auto p = poly_from_samples(nodes, vals);
    CHECK(p.coeffs[0] == doctest::Approx(1.0));
    CHECK(std::abs(p.coeffs[1]) < 1e-14);
    CHECK(std::abs(p.coeffs[2]) < 1e-14);
  }
  {
    const auto nodes = chebyshev_nodes(4, 0.0, 2.0);
    std::vector<double> vals;
    for (double x : nodes) vals.push_back(std::pow(1.0 - x, 3));
    const auto p = poly_from_samples(nodes, vals).to(PolyBasis::OneMinusXi);
    CHECK(p.basis == PolyBasis::OneMinusXi);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(p.coeffs[k]) < 1e-12);
    CHECK(p.coeffs[3] == doctest::Approx(1.0).epsilon(1e-12));
  }
  const std::vector<double> dup{0.0, 1.0, 1.0}, v{1, 2, 3};
  try {
    poly_from_samples(dup, v);
    FAIL("expected DuplicateNodes");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DuplicateNodes);
  }
}

TEST_CASE("poly_from_samples reproduces random polynomials; basis change round-trips") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int deg = trial % 8;
    PolyCoeffs truth{PolyBasis::Monomial, {}};
    for (int k = 0; k <= deg; ++k) truth.coeffs.push_back(u(rng));
    const auto nodes = chebyshev_nodes(deg + 1, 0.0, 2.0);
    std::vector<double> vals;
    for (double x : nodes) vals.push_back(truth(x));
    const auto fit = poly_from_samples(nodes, vals);
    for (int i = 0; i < 10; ++i) {
      const double x = 2.0 * (i + 0.37) / 10.0;
      CHECK(fit(x) == doctest::Approx(truth(x)).epsilon(1e-10));
    }
    const auto back = truth.to(PolyBasis::OneMinusXi).to(PolyBasis::Monomial);
    for (int k = 0; k <= deg; ++k)
      CHECK(back.coeffs[k] == doctest::Approx(truth.coeffs[k]).epsilon(1e-12).scale(1.0));
    const double x = u(rng);
    CHECK(truth.to(PolyBasis::OneMinusXi)(x) == doctest::Approx(truth(x)).epsilon(1e-12));
  }
}

TEST_CASE("expand_linear_product") {
  const std::vector<double> c0{1.0, 2.0}, c1{3.0, -1.0};
  const auto p = expand_linear_product(c0, c1);  // (1+3u)(2-u) = 2 + 5u - 3u^2
  REQUIRE(p.size() == 3);
  CHECK(p[0] == doctest::Approx(2.0));
  CHECK(p[1] == doctest::Approx(5.0));
  CHECK(p[2] == doctest::Approx(-3.0));
}
