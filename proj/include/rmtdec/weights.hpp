#pragma once

// The admissible even weights w1 on (-omega, omega): Gauss, symmetric Jacobi
// and Cauchy, together with everything derived from the antiderivative
// recurrence (phi, psi, companion weight, w2, theta, alpha_k, beta_k).

#include "rmtdec/numerics.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace rmtdec {

enum class Family { Gauss, Jacobi, Cauchy };

std::string_view to_string(Family family);
/// Accepts "gauss", "jacobi", "cauchy" (case-insensitive). Throws BadParameter.
Family parse_family(std::string_view name);

class AdmissibleWeight {
 public:
  static AdmissibleWeight gauss();
  /// (1 - x^2)^a on (-1, 1); requires a > -1.
  static AdmissibleWeight jacobi(double a);
  /// (1 + x^2)^(-a-1) on the real line; requires a > -1/2.
  static AdmissibleWeight cauchy(double a);
  static AdmissibleWeight make(Family family, double a);

  Family family() const { return family_; }
  /// Parameter a (0 for Gauss, where it is unused).
  double a() const { return a_; }
  /// Support half-width: infinity for Gauss and Cauchy, 1 for Jacobi.
  double omega() const { return family_ == Family::Jacobi ? 1.0 : kInf; }
  /// Open bound on the recurrence order; infinite unless Cauchy (2a).
  double kappa_bound() const { return family_ == Family::Cauchy ? 2.0 * a_ : kInf; }
  /// True if the recurrence may be used at order k (strict k < 2a for Cauchy).
  bool order_allowed(int k) const { return k >= 0 && static_cast<double>(k) < kappa_bound(); }
  /// Largest legal recurrence order, capped at `cap`.
  int max_order(int cap) const;

  /// Half-mass: theta = (1/2) * integral of w1 over the support (closed form).
  double theta() const;

  double w1(double x) const;
  double log_w1(double x) const;
  double phi(double x) const;
  double companion(double x) const;         // phi * w1
  double companion_derivative(double x) const;
  double w2(double x) const;                // phi * w1^2
  double log_w2(double x) const;
  /// integral of w1 from 0 to x, by adaptive quadrature.
  double theta1(double x) const;
  /// psi = -theta1 / companion, with psi(0) = 0.
  double psi(double x) const;

  /// alpha_0 = 1; Table values for k >= 1. Throws OrderExceeded.
  double alpha(int k) const;
  /// beta_0 = 0, beta_1 = 0. Throws OrderExceeded.
  double beta(int k) const;
  /// A_{n,nu} = prod_{k<n} alpha_{2k+nu}; needs 2(n-1)+nu within the order bound.
  double big_A(int n, int nu) const;

  std::string label() const;

  bool in_support(double x) const { return std::abs(x) < omega(); }

 private:
  AdmissibleWeight(Family family, double a) : family_(family), a_(a) {}
  void require_support(double x) const;
  void require_order(int k) const;

  Family family_;
  double a_;
};

double eval_w1(const AdmissibleWeight& w, double x);

/// Max over points of |(x^2 - beta_k + (k-1) alpha_k phi) w1 + alpha_k x (phi w1)'|
/// relative to the largest term magnitude seen.
double check_recurrence(const AdmissibleWeight& w, int k, std::span<const double> points);

/// Map the n-dependent parameterisation of the admissible pairs table to the
/// canonical one. Only Cauchy differs: (1+x^2)^(-(n+a+1)/2) has canonical
/// a_c = (n + a - 1)/2. Throws BadParameter if a_c <= -1/2.
AdmissibleWeight from_table1(Family family, int n, double a_table1);

}  // namespace rmtdec
