#include "doctest.h"

#include "rmtdec/decimation.hpp"
#include "rmtdec/error.hpp"
#include "rmtdec/verify.hpp"

#include <cmath>
#include <numbers>

using namespace rmtdec;

TEST_CASE("two-sample KS examples") {
  std::vector<double> a{0.1, 0.4, 0.2, 0.9};
  const TestResult same = ks_two_sample(a, a);
  CHECK(same.statistic == 0.0);
  CHECK(same.p == doctest::Approx(1.0));
  const std::vector<double> zeros(100, 0.0), ones(100, 1.0);
  const TestResult apart = ks_two_sample(zeros, ones);
  CHECK(apart.statistic == 1.0);
  CHECK(apart.p < 1e-20);
  CHECK_THROWS_AS(ks_two_sample({}, a), Error);

  EnsembleSpec spec;
  spec.kind = EnsembleKind::OE;
  spec.n = 1;
  spec.weight = AdmissibleWeight::gauss();
  const auto x = sample_ensemble(spec, 10000, 1), y = sample_ensemble(spec, 10000, 2);
  CHECK(ks_two_sample(x.values, y.values).p > 1e-3);
}

TEST_CASE("recurrence and theta") {
  for (const auto& w : {AdmissibleWeight::gauss(), AdmissibleWeight::jacobi(0.0), AdmissibleWeight::jacobi(0.5),
                        AdmissibleWeight::jacobi(2.0), AdmissibleWeight::cauchy(2.0), AdmissibleWeight::cauchy(3.5)}) {
    const auto rep = verify_recurrence(w);
    CHECK(rep.pass());
  }
  // Cauchy a = 2 allows orders 1..3 only.
  const auto rep = verify_recurrence(AdmissibleWeight::cauchy(2.0));
  CHECK(rep.checks.size() == 4);
}

TEST_CASE("sign-sum factorisation") {
  for (int n = 1; n <= 5; ++n) CHECK(verify_factorization(AdmissibleWeight::jacobi(0.5), n, 300, n).pass());
}

TEST_CASE("Dixon-Anderson integrals") {
  SUBCASE("one point, Gauss, closed form") {
    // s1 = 1: integral of t e^{-t^2/2} over (1, inf) is e^{-1/2}.
    const auto w = AdmissibleWeight::gauss();
    CHECK(w.big_A(1, 1) * w.companion(1.0) == doctest::Approx(std::exp(-0.5)));
    CHECK(verify_dixon_anderson(w, 1, 0, 3, 1).pass());
  }
  for (const auto& w : {AdmissibleWeight::gauss(), AdmissibleWeight::jacobi(0.0), AdmissibleWeight::cauchy(3.5)})
    for (int mu : {0, 1}) CHECK(verify_dixon_anderson(w, 1, mu, 2, 7).pass());
  CHECK_THROWS_AS(verify_dixon_anderson(AdmissibleWeight::cauchy(0.5), 2, 0), Error);
}

TEST_CASE("distributional checks at moderate size") {
  VerifyOptions o;
  o.count = 20000;
  o.seed = 5;
  SUBCASE("theorem 1") {
    CHECK(verify_thm1(AdmissibleWeight::gauss(), 2, o).pass());
    CHECK(verify_thm1(AdmissibleWeight::gauss(), 3, o).pass());
    CHECK(verify_thm1(cauchy_a0(3), 3, o).pass());
  }
  SUBCASE("superposition") {
    CHECK(verify_cor1(AdmissibleWeight::gauss(), 1, o).pass());
    CHECK(verify_cor1(AdmissibleWeight::gauss(), 2, o).pass());
    CHECK(verify_ue_split(AdmissibleWeight::gauss(), 3, o).pass());
  }
  SUBCASE("circular") {
    CHECK(verify_thmCE(2, o).pass());
    CHECK(verify_thmCE(3, o).pass());
  }
  SUBCASE("odd marginal") {
    CHECK(verify_q_odd(AdmissibleWeight::gauss(), 2, o).pass());
    CHECK(verify_q_odd(AdmissibleWeight::jacobi(0.0), 3, o).pass());
  }
}

TEST_CASE("a wrong pairing is rejected") {
  // even|OE_3| is chUE_1 with x^2 w2; comparing against mu = 0 must fail.
  VerifyOptions o;
  o.count = 20000;
  EnsembleSpec wrong;
  wrong.kind = EnsembleKind::chUE;
  wrong.n = 1;
  wrong.mu = 0;
  wrong.weight = AdmissibleWeight::gauss();
  const auto oe = sample_ensemble([] {
    EnsembleSpec s;
    s.kind = EnsembleKind::OE;
    s.n = 3;
    s.weight = AdmissibleWeight::gauss();
    return s;
  }(), o.count, 1);
  const auto ch = sample_ensemble(wrong, o.count, 2);
  std::vector<double> even;
  for (std::size_t i = 0; i < oe.size(); ++i) {
    const auto d = decimate(singular_values(oe.row(i)));
    even.insert(even.end(), d.even.begin(), d.even.end());
  }
  CHECK_FALSE(compare_spectra(even, ch.values, 1, 3).pass());
}

TEST_CASE("calibration and determinism") {
  const CalibrationResult c = calibrate(5, 5000, 3);
  CHECK(c.repetitions == 5);
  CHECK(c.rate() >= 0.8);

  VerifyOptions o;
  o.count = 5000;
  o.seed = 9;
  const auto a = verify_thm1(AdmissibleWeight::gauss(), 2, o), b = verify_thm1(AdmissibleWeight::gauss(), 2, o);
  REQUIRE(a.checks.size() == b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) CHECK(a.checks[i].value == b.checks[i].value);
}

TEST_CASE("suite plumbing") {
  CHECK(identity_names().size() == 13);
  SuiteOptions s;
  s.quick = true;
  const auto reps = run_identity("recurrence", s);
  CHECK(reps.size() == 6);
  CHECK_THROWS_AS(run_identity("nope", s), Error);
  const std::string j = to_json(reps);
  CHECK(j.find("\"reports\"") != std::string::npos);
}
