#include "doctest.h"

#include "rmtdec/error.hpp"
#include "rmtdec/gap.hpp"

#include <cmath>
#include <numbers>

using namespace rmtdec;

namespace {

double normal_mass(double s) { return std::erf(s / std::numbers::sqrt2); }

}  // namespace

TEST_CASE("Monte Carlo gaps of small ensembles") {
  EnsembleSpec spec;
  spec.kind = EnsembleKind::OE;
  spec.n = 1;
  spec.weight = AdmissibleWeight::gauss();
  const GapEstimate all = gap_mc(spec, {-kInf, kInf}, 1, 2000, 3);
  CHECK(all.E(1) == 1.0);
  CHECK(all.E(0) == 0.0);

  const GapEstimate unit = gap_mc(spec, {-1.0, 1.0}, 1, 40000, 4);
  CHECK(std::abs(unit.E(1) - normal_mass(1.0)) < 3.0 * unit.stderr_of(1));

  EnsembleSpec cue;
  cue.kind = EnsembleKind::CUE;
  cue.n = 2;
  CHECK(gap_mc(cue, {-std::numbers::pi - 1e-9, std::numbers::pi + 1e-9}, 2, 500, 5).E(2) == 1.0);
}

TEST_CASE("unitary Gram engine") {
  const auto w = AdmissibleWeight::gauss();
  const GapPolynomial full = gap_ue_exact(w, 3, {-kInf, kInf});
  CHECK(full.E(3) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(full.E(0)) < 1e-10);
  const GapPolynomial empty = gap_ue_exact(w, 3, {0.5, 0.5});
  CHECK(empty.E(0) == doctest::Approx(1.0));

  const GapPolynomial one = gap_ue_exact(w, 1, {-1.0, 1.0});
  CHECK(one.E(1) == doctest::Approx(std::erf(1.0)).epsilon(1e-12));
  CHECK(one.E(0) == doctest::Approx(1.0 - std::erf(1.0)).epsilon(1e-12));

  // E(0) = det(I - G).
  const Measure meas = Measure::on_line([w](double x) { return w.log_w2(x); }, -kInf, kInf);
  const OrthoSystem sys = OrthoSystem::build(meas, 3);
  for (double s : {0.3, 0.9, 1.7}) {
    const Matrix G = gram(sys, {-s, s}, {0, 1, 2, 3});
    const double direct = (Matrix::Identity(4, 4) - G).determinant();
    CHECK(std::abs(gap_ue_exact(meas, 4, {-s, s}).E(0) - direct) < 1e-11);
  }
}

TEST_CASE("chiral engine") {
  const auto w = AdmissibleWeight::gauss();
  CHECK(gap_chue_exact(w, 0, 1, 0.8).E(1) == doctest::Approx(std::erf(0.8)).epsilon(1e-12));
  // x^2 e^{-x^2}: integral on (0, s) is (sqrt(pi) erf(s) / 2 - s e^{-s^2}) / 2.
  const double s = 1.1;
  const double part = 0.5 * (0.5 * std::sqrt(std::numbers::pi) * std::erf(s) - s * std::exp(-s * s));
  CHECK(gap_chue_exact(w, 1, 1, s).E(1) == doctest::Approx(part / (std::sqrt(std::numbers::pi) / 4)).epsilon(1e-11));
  const GapPolynomial top = gap_chue_exact(w, 1, 3, kInf);
  CHECK(top.E(3) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("circular engines") {
  const GapPolynomial full = gap_cue_exact(3, std::numbers::pi);
  CHECK(full.E(3) == doctest::Approx(1.0));
  // n = 1: uniform angle.
  CHECK(gap_cue_exact(1, 1.0).E(1) == doctest::Approx(1.0 / std::numbers::pi));

  SUBCASE("the unitary generating function factors into the two orthogonal ones") {
    for (int n : {1, 2, 3, 4, 5})
      for (double t : {0.4, 1.3, 2.9}) {
        const auto c = gap_cue_exact(n, t);
        const auto p = gap_orthogonal_exact(1, n, t), m = gap_orthogonal_exact(-1, n, t);
        for (double xi : {0.25, 1.0, 1.8}) CHECK(c.generating(xi) == doctest::Approx(p.generating(xi) * m.generating(xi)).epsilon(1e-11));
      }
  }

  SUBCASE("orthogonal engine against Haar samples") {
    for (int n : {2, 3}) {
      for (int sign : {1, -1}) {
        const EnsembleKind group = cauchy_chue_group(sign > 0 ? 0 : 1, n);
        const SampleBatch b = sample_haar_circular(group, n, 40000, 17 + n);
        const GapEstimate est = gap_counts(b, {0.0, 1.2}, -1);
        const GapPolynomial ex = gap_orthogonal_exact(sign, n, 1.2);
        REQUIRE(ex.n == b.width);
        for (int k = 0; k <= ex.n; ++k) {
          const double se = std::sqrt(std::max(ex.E(k) * (1 - ex.E(k)), 1e-12) / 40000.0);
          CHECK(std::abs(est.E(k) - ex.E(k)) < 4.0 * se);
        }
      }
    }
  }
}

TEST_CASE("odd beta = 1 engine") {
  const auto g = AdmissibleWeight::gauss();
  SUBCASE("one point") {
    const GapPolynomial e = gap_oe_odd_exact(g, 1, 1.0);
    CHECK(e.E(1) == doctest::Approx(normal_mass(1.0)).epsilon(1e-12));
    const auto c = AdmissibleWeight::cauchy(1.5);
    CHECK(gap_oe_odd_exact(c, 1, 0.7).E(1) == doctest::Approx(c.theta1(0.7) / c.theta()).epsilon(1e-12));
  }
  SUBCASE("three points against quadrature") {
    const auto bf = gap_oe_bruteforce(log_weight_w1(g), 3, {-1.0, 1.0}, 1e-9);
    const GapPolynomial e = gap_oe_odd_exact(g, 3, 1.0);
    e.check();
    for (int k = 0; k <= 3; ++k) CHECK(std::abs(e.E(k) - bf[k]) < 1e-6);
  }
  SUBCASE("direct and gaudin agree") {
    for (const auto& w : {g, AdmissibleWeight::jacobi(0.0), AdmissibleWeight::jacobi(2.0), AdmissibleWeight::cauchy(3.5)}) {
      for (int n : {3, 5}) {
        const OddGapEngine engine(w, n);
        for (double s : {0.2, 0.6, 0.95}) {
          const auto a = engine.gaps(s, GapMode::Direct), b = engine.gaps(s, GapMode::Gaudin);
          a.check();
          for (int k = 0; k <= n; ++k) CHECK(std::abs(a.E(k) - b.E(k)) < 1e-9);
          CHECK(engine.truncation_residual(s, GapMode::Gaudin) < 1e-9);
          const GaudinData gd = engine.gaudin(s);
          CHECK((gd.C * gd.C.transpose() - Matrix::Identity(engine.m(), engine.m())).cwiseAbs().maxCoeff() < 1e-10);
          for (int j = 0; j < engine.m(); ++j) CHECK((gd.nus(j) > 0.0 && gd.nus(j) < 1.0));
        }
      }
    }
  }
  SUBCASE("whole support") {
    const GapPolynomial e = gap_oe_odd_exact(AdmissibleWeight::jacobi(0.5), 3, 1.0);
    CHECK(e.E(3) == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("monotone no-point probability") {
    for (const auto& w : {g, AdmissibleWeight::cauchy(2.0)}) {
      const OddGapEngine engine(w, 3);
      double prev = 1.0;
      for (double s = 0.1; s < 3.0; s += 0.3) {
        const double e0 = engine.gaps(s).E(0);
        CHECK(e0 <= prev + 1e-12);
        prev = e0;
      }
    }
    double prev = 1.0;
    for (double s = 0.1; s < 3.0; s += 0.3) {
      const double e0 = gap_ue_exact(g, 3, {-s, s}).E(0);
      CHECK(e0 <= prev + 1e-12);
      prev = e0;
    }
  }
  SUBCASE("even order is rejected") { CHECK_THROWS_AS(OddGapEngine(g, 4), Error); }
}

TEST_CASE("brute force quadrature") {
  const auto g = AdmissibleWeight::gauss();
  CHECK(gap_oe_bruteforce(log_weight_w1(g), 1, {-1.0, 1.0}, 1) == doctest::Approx(normal_mass(1.0)).epsilon(1e-7));
  CHECK(gap_oe_bruteforce(log_weight_w1(AdmissibleWeight::jacobi(0.0)), 2, {-1.0, 1.0}, 2) ==
        doctest::Approx(1.0));

  EnsembleSpec spec;
  spec.kind = EnsembleKind::OE;
  spec.n = 2;
  spec.weight = g;
  const GapEstimate est = gap_mc(spec, {-0.5, 0.5}, 2, 40000, 8);
  const double bf = gap_oe_bruteforce(log_weight_w1(g), 2, {-0.5, 0.5}, 0);
  CHECK(std::abs(est.E(0) - bf) < 3.0 * est.stderr_of(0));
  CHECK_THROWS_AS(gap_oe_bruteforce(log_weight_w1(g), 5, {-1.0, 1.0}), Error);
}

TEST_CASE("derivative lemma calculus") {
  PolyCoeffs g;
  g.coeffs = {1.0};
  CHECK(compose_b1(g).coeffs == std::vector<double>{1.0});
  g.coeffs = {0.0, 1.0};
  CHECK(compose_b1(g).coeffs == std::vector<double>{0.0, 2.0, -1.0});
  CHECK(compose_b1(g, true).coeffs == std::vector<double>{0.0, 0.0, 2.0, -1.0});
  // G = xi: rhs(0) = 1, rhs(1) = -1.
  CHECK(b1_rhs(g, 0) == doctest::Approx(1.0));
  CHECK(b1_rhs(g, 1) == doctest::Approx(-1.0));
  const auto rep = check_derivative_lemma(300, 6, 9);
  CHECK(rep.pass());
}

TEST_CASE("theorem checkers") {
  SUBCASE("single point, empty chiral side") {
    const auto rep = check_thm_gap(AdmissibleWeight::gauss(), 1, {0}, {0.7});
    CHECK(rep.pass());
    CHECK(rep.checks.front().lhs == doctest::Approx(1.0));
  }
  SUBCASE("exact for odd n") {
    for (const auto& w : {AdmissibleWeight::gauss(), AdmissibleWeight::jacobi(0.0), AdmissibleWeight::cauchy(3.5)}) {
      const auto rep = check_thm_gap(w, 3, {0, 1}, {0.4, 1.0});
      CHECK(rep.pass());
    }
  }
  SUBCASE("Monte Carlo for even n") {
    ThmGapOptions o;
    o.count = 30000;
    o.seed = 4;
    const auto rep = check_thm_gap(AdmissibleWeight::gauss(), 2, {0, 1}, {1.0}, o);
    CHECK(rep.pass());
  }
  SUBCASE("structure") {
    for (int n : {1, 3, 5}) {
      const auto rep = check_B1_structure(AdmissibleWeight::gauss(), n, 1.0, chebyshev_nodes(2 * n + 3, 0.0, 2.0));
      CHECK(rep.pass());
    }
    const OddGapEngine one(AdmissibleWeight::gauss(), 1);
    CHECK(one.generating(1.0, 0.0, GapMode::Direct) == doctest::Approx(1.0));
  }
  SUBCASE("circular") {
    McOptions o;
    o.count = 20000;
    o.seed = 21;
    CHECK(check_8_31p(2, {0, 1}, {std::numbers::pi / 2, std::numbers::pi}, o).pass());
    CHECK(check_thm_D4(3, {0, 1}, {1.0, std::numbers::pi}, o).pass());
  }
  SUBCASE("superposition") {
    McOptions o;
    o.count = 20000;
    o.seed = 2;
    const auto rep = check_identity_24(pair_laguerre_even(), 2, {0, 1, -1}, {0.5}, o);
    CHECK(rep.pass());
    const auto cp = check_identity_24cp(pair_gauss_odd(), 2, {0}, {0.0}, false, o);
    CHECK(cp.pass());
  }
}

TEST_CASE("report serialisation") {
  VerificationReport r;
  r.identity = "demo";
  r.param("n", 3);
  r.add_residual("a", 1.0, 1.0 + 1e-12, 1e-9);
  r.add_p("b", 0.1, 0.5);
  r.add_z("c", 0.5, 0.5, 0.0);
  CHECK(r.pass());
  const std::string j = to_json(r);
  CHECK(j.find("\"identity\": \"demo\"") != std::string::npos);
  CHECK(j.find("\"pass\": true") != std::string::npos);
  r.add_p("d", 1.0, 1e-6);
  CHECK_FALSE(r.pass());
  CHECK(r.failures() == 1);
}
