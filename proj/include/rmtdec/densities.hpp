#pragma once

// Joint and marginal eigenvalue / singular-value densities, unnormalised and
// in log form. Coincident points give -infinity.

#include "rmtdec/numerics.hpp"
#include "rmtdec/weights.hpp"

#include <span>
#include <string>
#include <vector>

namespace rmtdec {

/// A single-particle weight given by its logarithm on (lo, hi).
/// With closed_lo the lower end itself is allowed (chiral weights at 0).
struct LogWeight {
  RealFn log_w;
  double lo = -kInf;
  double hi = kInf;
  bool closed_lo = false;
  std::string label;

  bool in_support(double x) const { return (x > lo || (closed_lo && x == lo)) && x < hi; }
};

LogWeight log_weight_w1(const AdmissibleWeight& w);
LogWeight log_weight_w2(const AdmissibleWeight& w);
/// x^(2 mu) w2(x) on [0, omega).
LogWeight chiral_weight(const AdmissibleWeight& w, int mu);
/// Arbitrary positive weight, e.g. the weight pairs used by the gap identities.
LogWeight custom_weight(RealFn log_w, double lo, double hi, std::string label, bool closed_lo = false);

/// Sum log w(x_k) + beta * sum_{j<k} log|x_k - x_j|. Throws OutOfSupport.
double log_p_beta(const LogWeight& w, int beta, std::span<const double> x);
/// Uses w1 for beta = 1 and w2 for beta = 2.
double log_p_beta(const AdmissibleWeight& w, int beta, std::span<const double> x);

/// Sum log w(x_k) + 2 sum_{j<k} log|x_k^2 - x_j^2|; needs x >= 0.
double log_p_chiral(const LogWeight& w, std::span<const double> x);

/// Singular values split as x_j = sigma_{2j-1}, y_j = sigma_{2j}.
/// When n is odd, y gets the extra entry omega as padding.
struct XYCoords {
  std::vector<double> x;
  std::vector<double> y;
  int mu = 0;
};
XYCoords split_xy(std::span<const double> sv, double omega);

/// Joint density of the singular values of OE_n(w1):
/// prod w1(x_k) Delta(x^2) * prod y_k w1(y_k) Delta(y^2).
/// Throws InterlacingViolated unless 0 <= sigma_1 <= ... <= sigma_n.
double log_q_xy(const AdmissibleWeight& w, std::span<const double> sv);

/// Even-location marginal: same as log_p_chiral with x^(2 mu) w2.
double log_q_even(const AdmissibleWeight& w, std::span<const double> s, int mu);

/// Odd-location marginal for OE_n, n = 2m + mu, t of length m + mu:
/// g(t) * det[companion(t_j) t_j^(1-mu+2i) (i < m+mu-1); theta_{1-mu}(t_j)],
/// g(t) = prod t_k^(1-mu) w1(t_k) Delta(t^2), theta_0 = 1, theta_1(x) = int_0^x w1.
double log_q_odd(const AdmissibleWeight& w, std::span<const double> t, int n);

/// Integral of exp(log_density) over lo < x_1 < ... < x_n < hi; n <= 4.
/// site_log_weight (optional) prunes nodes where the weight underflows.
/// Throws BadParameter for larger n, NonConvergence if the nested rule does not settle.
double normalize(const std::function<double(std::span<const double>)>& log_density, int n, double lo,
                 double hi, const RealFn& site_log_weight = {}, double rel_tol = 1e-8);

}  // namespace rmtdec
