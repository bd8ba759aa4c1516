#include "rmtdec/weights.hpp"

#include "rmtdec/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

namespace rmtdec {

std::string_view to_string(Family family) {
  switch (family) {
    case Family::Gauss: return "gauss";
    case Family::Jacobi: return "jacobi";
    case Family::Cauchy: return "cauchy";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "gauss") return Family::Gauss;
  if (lower == "jacobi") return Family::Jacobi;
  if (lower == "cauchy") return Family::Cauchy;
  throw Error(ErrorCode::BadParameter, "unknown weight family '" + lower + "'");
}

AdmissibleWeight AdmissibleWeight::gauss() { return {Family::Gauss, 0.0}; }

AdmissibleWeight AdmissibleWeight::jacobi(double a) {
  if (!(a > -1.0)) throw Error(ErrorCode::BadParameter, "Jacobi weight needs a > -1");
  return {Family::Jacobi, a};
}

AdmissibleWeight AdmissibleWeight::cauchy(double a) {
  if (!(a > -0.5)) throw Error(ErrorCode::BadParameter, "Cauchy weight needs a > -1/2");
  return {Family::Cauchy, a};
}

AdmissibleWeight AdmissibleWeight::make(Family family, double a) {
  switch (family) {
    case Family::Gauss: return gauss();
    case Family::Jacobi: return jacobi(a);
    case Family::Cauchy: return cauchy(a);
  }
  throw Error(ErrorCode::BadParameter, "unknown family");
}

int AdmissibleWeight::max_order(int cap) const {
  int k = 0;
  while (k < cap && order_allowed(k + 1)) ++k;
  return k;
}

double AdmissibleWeight::theta() const {
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  switch (family_) {
    case Family::Gauss: return std::sqrt(0.5 * std::numbers::pi);
    case Family::Jacobi:
      return sqrt_pi * std::exp(std::lgamma(a_ + 1.0) - std::lgamma(a_ + 1.5)) / 2.0;
    case Family::Cauchy:
      return sqrt_pi * std::exp(std::lgamma(a_ + 0.5) - std::lgamma(a_ + 1.0)) / 2.0;
  }
  return 0.0;
}

void AdmissibleWeight::require_support(double x) const {
  if (!in_support(x)) {
    std::ostringstream msg;
    msg << "x = " << x << " outside support of " << label();
    throw Error(ErrorCode::OutOfSupport, msg.str());
  }
}

void AdmissibleWeight::require_order(int k) const {
  if (!order_allowed(k)) {
    std::ostringstream msg;
    msg << "recurrence order " << k << " not below kappa bound " << kappa_bound() << " for "
        << label();
    throw Error(ErrorCode::OrderExceeded, msg.str());
  }
}

double AdmissibleWeight::log_w1(double x) const {
  switch (family_) {
    case Family::Gauss: return -0.5 * x * x;
    case Family::Jacobi:
      require_support(x);
      return a_ * std::log1p(-x * x);
    case Family::Cauchy: return -(a_ + 1.0) * std::log1p(x * x);
  }
  return 0.0;
}

double AdmissibleWeight::w1(double x) const {
  switch (family_) {
    case Family::Gauss: return std::exp(-0.5 * x * x);
    case Family::Jacobi:
      require_support(x);
      return std::pow(1.0 - x * x, a_);
    case Family::Cauchy: return std::pow(1.0 + x * x, -a_ - 1.0);
  }
  return 0.0;
}

double AdmissibleWeight::phi(double x) const {
  switch (family_) {
    case Family::Gauss: return 1.0;
    case Family::Jacobi: return 1.0 - x * x;
    case Family::Cauchy: return 1.0 + x * x;
  }
  return 1.0;
}

double AdmissibleWeight::companion(double x) const {
  switch (family_) {
    case Family::Gauss: return std::exp(-0.5 * x * x);
    case Family::Jacobi:
      require_support(x);
      return std::pow(1.0 - x * x, a_ + 1.0);
    case Family::Cauchy: return std::pow(1.0 + x * x, -a_);
  }
  return 0.0;
}

double AdmissibleWeight::companion_derivative(double x) const {
  switch (family_) {
    case Family::Gauss: return -x * std::exp(-0.5 * x * x);
    case Family::Jacobi:
      require_support(x);
      return -2.0 * (a_ + 1.0) * x * std::pow(1.0 - x * x, a_);
    case Family::Cauchy: return -2.0 * a_ * x * std::pow(1.0 + x * x, -a_ - 1.0);
  }
  return 0.0;
}

double AdmissibleWeight::log_w2(double x) const {
  switch (family_) {
    case Family::Gauss: return -x * x;
    case Family::Jacobi:
      require_support(x);
      return (2.0 * a_ + 1.0) * std::log1p(-x * x);
    case Family::Cauchy: return -(2.0 * a_ + 1.0) * std::log1p(x * x);
  }
  return 0.0;
}

double AdmissibleWeight::w2(double x) const {
  switch (family_) {
    case Family::Gauss: return std::exp(-x * x);
    case Family::Jacobi:
      require_support(x);
      return std::pow(1.0 - x * x, 2.0 * a_ + 1.0);
    case Family::Cauchy: return std::pow(1.0 + x * x, -2.0 * a_ - 1.0);
  }
  return 0.0;
}

double AdmissibleWeight::theta1(double x) const {
  require_support(x);
  if (x == 0.0) return 0.0;
  if (family_ == Family::Jacobi && a_ == 0.0) return x;
  if (family_ == Family::Gauss) return std::sqrt(0.5 * std::numbers::pi) * std::erf(x / std::numbers::sqrt2);
  const double sign = x < 0.0 ? -1.0 : 1.0;
  IntegrationOptions opts;
  opts.rel_tol = 1e-14;
  const double ax = std::abs(x);
  auto f = [this](double t) { return w1(t); };
  // Far out on an unbounded support, subtract the small tail from the half-mass.
  if (family_ != Family::Jacobi && ax > 1.0) {
    opts.abs_tol = 1e-16 * theta();
    return sign * (theta() - integrate_adaptive(f, ax, kInf, opts).value);
  }
  if (family_ == Family::Jacobi && ax > 0.5) {
    // tail = integral_x^1 (1-t)^a (1+t)^a dt with v = (1-t)^(a+1).
    const double p = a_ + 1.0;
    auto g = [this, p](double v) { return std::pow(2.0 - std::pow(v, 1.0 / p), a_) / p; };
    const double tail = integrate_adaptive(g, 0.0, std::pow(1.0 - ax, p), opts).value;
    return sign * (theta() - tail);
  }
  return sign * integrate_adaptive(f, 0.0, ax, opts).value;
}

double AdmissibleWeight::psi(double x) const {
  if (x == 0.0) return 0.0;
  return -theta1(x) / companion(x);
}

double AdmissibleWeight::alpha(int k) const {
  if (k < 0) throw Error(ErrorCode::BadParameter, "alpha index must be >= 0");
  if (k == 0) return 1.0;
  require_order(k);
  switch (family_) {
    case Family::Gauss: return 1.0;
    case Family::Jacobi: return 1.0 / (2.0 * a_ + 1.0 + k);
    case Family::Cauchy: return 1.0 / (2.0 * a_ + 1.0 - k);
  }
  return 0.0;
}

double AdmissibleWeight::beta(int k) const {
  if (k < 0) throw Error(ErrorCode::BadParameter, "beta index must be >= 0");
  if (k == 0) return 0.0;
  require_order(k);
  switch (family_) {
    case Family::Gauss: return k - 1.0;
    case Family::Jacobi: return (k - 1.0) / (2.0 * a_ + 1.0 + k);
    case Family::Cauchy: return (k - 1.0) / (2.0 * a_ + 1.0 - k);
  }
  return 0.0;
}

double AdmissibleWeight::big_A(int n, int nu) const {
  if (n < 1 || (nu != 0 && nu != 1))
    throw Error(ErrorCode::BadParameter, "big_A needs n >= 1 and nu in {0,1}");
  require_order(2 * (n - 1) + nu);
  double prod = 1.0;
  for (int k = 0; k < n; ++k) prod *= alpha(2 * k + nu);
  return prod;
}

std::string AdmissibleWeight::label() const {
  std::ostringstream out;
  out << to_string(family_);
  if (family_ != Family::Gauss) out << "(a=" << a_ << ")";
  return out.str();
}

double eval_w1(const AdmissibleWeight& w, double x) { return w.w1(x); }

double check_recurrence(const AdmissibleWeight& w, int k, std::span<const double> points) {
  if (k < 1) throw Error(ErrorCode::BadParameter, "recurrence order must be >= 1");
  const double ak = w.alpha(k);
  const double bk = w.beta(k);
  double worst = 0.0;
  for (double x : points) {
    const double w1 = w.w1(x);
    const double lhs = (x * x - bk + (k - 1.0) * ak * w.phi(x)) * w1;
    const double rhs = -ak * x * w.companion_derivative(x);
    const double scale = std::max({std::abs(x * x * w1), std::abs(bk * w1),
                                   std::abs((k - 1.0) * ak * w.phi(x) * w1), std::abs(rhs),
                                   std::numeric_limits<double>::min()});
    worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  return worst;
}

AdmissibleWeight from_table1(Family family, int n, double a_table1) {
  if (n < 1) throw Error(ErrorCode::BadParameter, "order n must be >= 1");
  if (family != Family::Cauchy) return AdmissibleWeight::make(family, a_table1);
  const double ac = 0.5 * (n + a_table1 - 1.0);
  if (!(ac > -0.5)) {
    std::ostringstream msg;
    msg << "Cauchy table parameter a=" << a_table1 << " at n=" << n << " gives canonical a=" << ac;
    throw Error(ErrorCode::BadParameter, msg.str());
  }
  return AdmissibleWeight::cauchy(ac);
}

}  // namespace rmtdec
