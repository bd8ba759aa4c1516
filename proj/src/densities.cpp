#include "rmtdec/densities.hpp"

#include "rmtdec/error.hpp"

#include <cmath>
#include <sstream>

namespace rmtdec {

namespace {

void require_in(const LogWeight& w, double x) {
  if (!w.in_support(x)) {
    std::ostringstream msg;
    msg << "x = " << x << " outside support of " << w.label;
    throw Error(ErrorCode::OutOfSupport, msg.str());
  }
}

double log_abs_vandermonde(std::span<const double> x, bool squared) {
  double sum = 0.0;
  for (std::size_t k = 1; k < x.size(); ++k)
    for (std::size_t j = 0; j < k; ++j) {
      const double d = squared ? (x[k] - x[j]) * (x[k] + x[j]) : x[k] - x[j];
      if (d == 0.0) return -kInf;
      sum += std::log(std::abs(d));
    }
  return sum;
}

}  // namespace

LogWeight log_weight_w1(const AdmissibleWeight& w) {
  return {[w](double x) { return w.log_w1(x); }, -w.omega(), w.omega(), false, "w1:" + w.label()};
}

LogWeight log_weight_w2(const AdmissibleWeight& w) {
  return {[w](double x) { return w.log_w2(x); }, -w.omega(), w.omega(), false, "w2:" + w.label()};
}

LogWeight chiral_weight(const AdmissibleWeight& w, int mu) {
  if (mu != 0 && mu != 1) throw Error(ErrorCode::BadParameter, "mu must be 0 or 1");
  RealFn f;
  if (mu == 0)
    f = [w](double x) { return w.log_w2(x); };
  else
    f = [w](double x) { return x == 0.0 ? -kInf : 2.0 * std::log(x) + w.log_w2(x); };
  return {f, 0.0, w.omega(), true, "x^" + std::to_string(2 * mu) + " w2:" + w.label()};
}

LogWeight custom_weight(RealFn log_w, double lo, double hi, std::string label, bool closed_lo) {
  if (!(lo < hi)) throw Error(ErrorCode::InvalidInterval, "weight support needs lo < hi");
  return {std::move(log_w), lo, hi, closed_lo, std::move(label)};
}

double log_p_beta(const LogWeight& w, int beta, std::span<const double> x) {
  if (beta != 1 && beta != 2) throw Error(ErrorCode::BadParameter, "beta must be 1 or 2");
  double sum = 0.0;
  for (double v : x) {
    require_in(w, v);
    sum += w.log_w(v);
  }
  const double vd = log_abs_vandermonde(x, false);
  return vd == -kInf ? -kInf : sum + beta * vd;
}

double log_p_beta(const AdmissibleWeight& w, int beta, std::span<const double> x) {
  return log_p_beta(beta == 1 ? log_weight_w1(w) : log_weight_w2(w), beta, x);
}

double log_p_chiral(const LogWeight& w, std::span<const double> x) {
  double sum = 0.0;
  for (double v : x) {
    if (v < 0.0) throw Error(ErrorCode::OutOfSupport, "chiral density needs nonnegative points");
    require_in(w, v);
    sum += w.log_w(v);
  }
  const double vd = log_abs_vandermonde(x, true);
  return vd == -kInf ? -kInf : sum + 2.0 * vd;
}

XYCoords split_xy(std::span<const double> sv, double omega) {
  XYCoords c;
  c.mu = static_cast<int>(sv.size() % 2);
  for (std::size_t i = 0; i < sv.size(); ++i) (i % 2 == 0 ? c.x : c.y).push_back(sv[i]);
  if (c.mu == 1) c.y.push_back(omega);
  return c;
}

double log_q_xy(const AdmissibleWeight& w, std::span<const double> sv) {
  for (std::size_t i = 0; i < sv.size(); ++i) {
    if (sv[i] < 0.0 || (i > 0 && sv[i] < sv[i - 1]))
      throw Error(ErrorCode::InterlacingViolated, "singular values must be nonnegative and ascending");
    if (!w.in_support(sv[i])) throw Error(ErrorCode::OutOfSupport, "singular value outside support");
  }
  const XYCoords c = split_xy(sv, w.omega());
  const std::span<const double> y(c.y.data(), c.y.size() - static_cast<std::size_t>(c.mu));
  double sum = 0.0;
  for (double v : c.x) sum += w.log_w1(v);
  for (double v : y) {
    if (v == 0.0) return -kInf;
    sum += std::log(v) + w.log_w1(v);
  }
  const double vx = log_abs_vandermonde(c.x, true);
  const double vy = log_abs_vandermonde(y, true);
  if (vx == -kInf || vy == -kInf) return -kInf;
  return sum + vx + vy;
}

double log_q_even(const AdmissibleWeight& w, std::span<const double> s, int mu) {
  return log_p_chiral(chiral_weight(w, mu), s);
}

double log_q_odd(const AdmissibleWeight& w, std::span<const double> t, int n) {
  if (n < 1) throw Error(ErrorCode::BadParameter, "n must be >= 1");
  const int mu = n % 2;
  const int mhat = n / 2 + mu;
  if (static_cast<int>(t.size()) != mhat) throw Error(ErrorCode::BadParameter, "odd marginal needs ceil(n/2) points");
  for (double v : t)
    if (v < 0.0 || !w.in_support(v)) throw Error(ErrorCode::OutOfSupport, "odd singular value outside support");

  const int nu = 1 - mu;
  double log_g = 0.0;
  for (double v : t) {
    if (nu == 1) {
      if (v == 0.0) return -kInf;
      log_g += std::log(v);
    }
    log_g += w.log_w1(v);
  }
  const double vd = log_abs_vandermonde(t, true);
  if (vd == -kInf) return -kInf;

  Matrix m(mhat, mhat);
  for (int j = 0; j < mhat; ++j) {
    // The determinant is positive for ascending t.
    if (j > 0 && t[j] < t[j - 1]) throw Error(ErrorCode::BadParameter, "odd singular values must be ascending");
    const double comp = w.companion(t[j]);
    for (int i = 0; i + 1 < mhat; ++i) m(i, j) = comp * std::pow(t[j], nu + 2 * i);
    m(mhat - 1, j) = nu == 0 ? 1.0 : w.theta1(t[j]);
  }
  const double det = determinant(m);
  if (!(det > 0.0)) return -kInf;
  return log_g + vd + std::log(det);
}

double normalize(const std::function<double(std::span<const double>)>& log_density, int n, double lo,
                 double hi, const RealFn& site_log_weight, double rel_tol) {
  if (n < 1 || n > 4) throw Error(ErrorCode::BadParameter, "normalize supports 1 <= n <= 4");
  return integrate_ordered(log_density, OrderedRegion::simplex(n, lo, hi), rel_tol, site_log_weight);
}

}  // namespace rmtdec
