#include "doctest.h"

#include "rmtdec/densities.hpp"
#include "rmtdec/decimation.hpp"
#include "rmtdec/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace rmtdec;

namespace {

std::vector<AdmissibleWeight> weights() {
  return {AdmissibleWeight::gauss(), AdmissibleWeight::jacobi(0.0), AdmissibleWeight::jacobi(0.6),
          AdmissibleWeight::cauchy(2.5)};
}

// Independent nested adaptive quadrature over a product of boxes.
double box_integral(const std::function<double(const std::vector<double>&)>& f,
                    const std::vector<Interval>& boxes) {
  std::vector<double> x(boxes.size());
  std::function<double(std::size_t)> level = [&](std::size_t k) -> double {
    if (k == boxes.size()) return f(x);
    return integrate(
        [&, k](double v) {
          x[k] = v;
          return level(k + 1);
        },
        boxes[k].lo, boxes[k].hi, 1e-11);
  };
  return level(0);
}

// Integrates exp(log_q_xy) over the free coordinates with the fixed ones held.
// fixed_are_even selects which decimated set is held fixed.
double marginal_oracle(const AdmissibleWeight& w, int n, const std::vector<double>& fixed, bool fixed_are_even) {
  // Positions by ascending index: even location when (n-1-i) is odd.
  std::vector<int> free_pos, fixed_pos;
  for (int i = 0; i < n; ++i) {
    const bool even = (n - 1 - i) % 2 == 1;
    (even == fixed_are_even ? fixed_pos : free_pos).push_back(i);
  }
  std::vector<double> sigma(n, 0.0);
  for (std::size_t k = 0; k < fixed_pos.size(); ++k) sigma[fixed_pos[k]] = fixed[k];
  std::vector<Interval> boxes;
  for (int p : free_pos) {
    const double lo = p == 0 ? 0.0 : sigma[p - 1];
    const double hi = p == n - 1 ? w.omega() : sigma[p + 1];
    boxes.push_back({lo, hi});
  }
  return box_integral(
      [&](const std::vector<double>& v) {
        std::vector<double> s = sigma;
        for (std::size_t k = 0; k < free_pos.size(); ++k) s[free_pos[k]] = v[k];
        return std::exp(log_q_xy(w, s));
      },
      boxes);
}

std::vector<double> random_ascending(std::mt19937_64& rng, int count, double hi) {
  std::uniform_real_distribution<double> u(0.05, hi);
  std::vector<double> v(count);
  for (auto& x : v) x = u(rng);
  std::sort(v.begin(), v.end());
  return v;
}

double hi_for(const AdmissibleWeight& w) { return w.family() == Family::Jacobi ? 0.95 : 2.5; }

}  // namespace

TEST_CASE("log_p_beta examples") {
  const std::vector<double> one{0.0};
  CHECK(log_p_beta(AdmissibleWeight::gauss(), 1, one) == 0.0);
  const std::vector<double> two{-0.5, 0.5};
  CHECK(log_p_beta(AdmissibleWeight::jacobi(0.0), 2, two) == doctest::Approx(2.0 * std::log(0.75)));
  const std::vector<double> tie{0.3, 0.3};
  CHECK(log_p_beta(AdmissibleWeight::gauss(), 1, tie) == -kInf);
  const std::vector<double> out{0.2, 1.0};
  CHECK_THROWS_AS(log_p_beta(AdmissibleWeight::jacobi(0.5), 1, out), Error);
  CHECK_THROWS_AS(log_p_beta(AdmissibleWeight::gauss(), 3, two), Error);
}

TEST_CASE("log_p_chiral examples") {
  const LogWeight flat = custom_weight([](double) { return 0.0; }, 0.0, 10.0, "flat", true);
  const std::vector<double> one{1.7};
  CHECK(log_p_chiral(flat, one) == 0.0);
  const std::vector<double> two{1.0, 2.0};
  CHECK(log_p_chiral(flat, two) == doctest::Approx(2.0 * std::log(3.0)));
  const std::vector<double> tie{1.0, 1.0};
  CHECK(log_p_chiral(flat, tie) == -kInf);
  const std::vector<double> neg{-1.0};
  CHECK_THROWS_AS(log_p_chiral(flat, neg), Error);
}

TEST_CASE("log_q_xy examples") {
  const auto g = AdmissibleWeight::gauss();
  const std::vector<double> one{0.8};
  CHECK(log_q_xy(g, one) == doctest::Approx(g.log_w1(0.8)));
  const std::vector<double> two{1.0, 2.0};
  CHECK(log_q_xy(g, two) == doctest::Approx(-0.5 + std::log(2.0) - 2.0));
  const std::vector<double> bad{2.0, 1.0};
  try {
    log_q_xy(g, bad);
    FAIL("expected InterlacingViolated");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InterlacingViolated);
  }
  const auto xy = split_xy(std::vector<double>{1, 2, 3}, kInf);
  CHECK(xy.x == std::vector<double>{1, 3});
  CHECK(xy.y.size() == 2);
  CHECK(xy.y[1] == kInf);
}

TEST_CASE("log_q_even examples") {
  const auto g = AdmissibleWeight::gauss();
  const std::vector<double> s{0.7};
  CHECK(log_q_even(g, s, 0) == doctest::Approx(-0.49));
  CHECK(log_q_even(g, s, 1) == doctest::Approx(2.0 * std::log(0.7) - 0.49));
  const std::vector<double> s2{0.4, 1.3};
  for (int mu : {0, 1})
    CHECK(std::abs(log_q_even(g, s2, mu) - log_p_chiral(chiral_weight(g, mu), s2)) < 1e-14);
}

TEST_CASE("log_q_odd examples") {
  const auto g = AdmissibleWeight::gauss();
  for (double t : {0.1, 0.9, 2.2}) {
    const std::vector<double> v{t};
    CHECK(log_q_odd(g, v, 1) == doctest::Approx(g.log_w1(t)).epsilon(1e-14));
    const double closed = t * std::exp(-0.5 * t * t) * std::sqrt(0.5 * std::numbers::pi) * std::erf(t / std::sqrt(2.0));
    CHECK(std::exp(log_q_odd(g, v, 2)) == doctest::Approx(closed).epsilon(1e-13));
    // Marginal oracle: integrate q(x; t) over 0 < x < t.
    const double oracle = integrate([&](double x) { return std::exp(log_q_xy(g, std::vector<double>{x, t})); }, 0.0, t);
    CHECK(std::exp(log_q_odd(g, v, 2)) == doctest::Approx(oracle).epsilon(1e-9));
  }
  const std::vector<double> tie{0.8, 0.8};
  CHECK(log_q_odd(g, tie, 3) == -kInf);
  const std::vector<double> wrong{0.8};
  CHECK_THROWS_AS(log_q_odd(g, wrong, 3), Error);
}

TEST_CASE("sign sum over eigenvalue signs factorises") {
  std::mt19937_64 rng(3);
  const auto g = AdmissibleWeight::gauss();
  for (int n = 1; n <= 6; ++n) {
    for (int trial = 0; trial < 200; ++trial) {
      const auto sv = random_ascending(rng, n, 3.0);
      double sum = 0.0;
      for (int mask = 0; mask < (1 << n); ++mask) {
        double vd = 1.0;
        std::vector<double> x(n);
        for (int i = 0; i < n; ++i) x[i] = (mask >> i & 1) ? -sv[i] : sv[i];
        for (int k = 0; k < n; ++k)
          for (int j = 0; j < k; ++j) vd *= std::abs(x[k] - x[j]);
        sum += vd;
      }
      double logw = 0.0;
      for (double v : sv) logw += g.log_w1(v);
      const double lhs = std::log(sum) + logw;
      CHECK(lhs - log_q_xy(g, sv) == doctest::Approx(n * std::log(2.0)).epsilon(1e-10));
    }
  }
}

TEST_CASE("integrating out the odd set gives the even marginal") {
  std::mt19937_64 rng(17);
  for (const auto& w : weights()) {
    for (int n : {2, 3, 4}) {
      const int m = n / 2, mu = n % 2;
      std::vector<double> ratios;
      for (int trial = 0; trial < 5; ++trial) {
        const auto s = random_ascending(rng, m, hi_for(w));
        ratios.push_back(marginal_oracle(w, n, s, true) / std::exp(log_q_even(w, s, mu)));
      }
      for (double r : ratios) CHECK(r == doctest::Approx(ratios[0]).epsilon(1e-6));
    }
  }
}

TEST_CASE("integrating out the even set gives the odd marginal") {
  std::mt19937_64 rng(19);
  for (const auto& w : weights()) {
    for (int n : {2, 3, 4, 5}) {
      const int mhat = n / 2 + n % 2;
      std::vector<double> ratios;
      for (int trial = 0; trial < 5; ++trial) {
        const auto t = random_ascending(rng, mhat, hi_for(w));
        ratios.push_back(marginal_oracle(w, n, t, false) / std::exp(log_q_odd(w, t, n)));
      }
      for (double r : ratios) CHECK(r == doctest::Approx(ratios[0]).epsilon(1e-6));
    }
  }
}

TEST_CASE("normalize examples") {
  const auto g = AdmissibleWeight::gauss();
  auto oe = [](const AdmissibleWeight& w) {
    return [w](std::span<const double> x) { return log_p_beta(w, 1, x); };
  };
  const RealFn site = [g](double x) { return g.log_w1(x); };
  CHECK(normalize(oe(g), 1, -kInf, kInf, site) == doctest::Approx(std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-7));
  // Without a site weight the heavy-tail chart is used.
  CHECK(normalize(oe(g), 1, -kInf, kInf) == doctest::Approx(std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-7));
  const LogWeight ch = chiral_weight(g, 0);
  CHECK(normalize([&](std::span<const double> x) { return log_p_chiral(ch, x); }, 1, 0.0, kInf) ==
        doctest::Approx(0.5 * std::sqrt(std::numbers::pi)).epsilon(1e-7));
  CHECK(normalize(oe(AdmissibleWeight::jacobi(0.0)), 2, -1.0, 1.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-7));
  // Cauchy (1+x^2)^{-2}: int = pi/2.
  CHECK(normalize(oe(AdmissibleWeight::cauchy(1.0)), 1, -kInf, kInf) ==
        doctest::Approx(0.5 * std::numbers::pi).epsilon(1e-7));
  // Mehta's integral: int_{R^n} prod e^{-x^2/2} |Delta| = (2 pi)^{n/2} prod_j Gamma(1+j/2)/Gamma(3/2).
  for (int n = 2; n <= 4; ++n) {
    double mehta = std::pow(2.0 * std::numbers::pi, 0.5 * n);
    for (int j = 1; j <= n; ++j) mehta *= std::tgamma(1.0 + 0.5 * j) / std::tgamma(1.5);
    mehta /= std::tgamma(n + 1.0);
    CHECK(normalize(oe(g), n, -kInf, kInf, site) == doctest::Approx(mehta).epsilon(1e-7));
  }
  CHECK_THROWS_AS(normalize(oe(g), 5, -kInf, kInf), Error);
}
