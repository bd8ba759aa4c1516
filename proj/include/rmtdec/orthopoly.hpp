#pragma once

// Orthonormal polynomials for a positive weight, built by the discretised
// Stieltjes procedure, and Gram matrices of those polynomials on subintervals.

#include "rmtdec/numerics.hpp"

#include <string>
#include <vector>

namespace rmtdec {

struct DiscreteMeasure {
  std::vector<double> nodes;    // in the polynomial variable
  std::vector<double> weights;  // positive

  double mass() const;
};

/// A positive density on an interval, given by its logarithm. The polynomial variable is either the
/// integration variable itself or, for the squared chart, y = x^2 with x >= 0;
/// in the latter case density(x) dx is pushed forward to the y-axis. The
/// squared chart keeps weights like x^(mu - 1/2) w(sqrt(x)) free of their
/// endpoint singularity.
class Measure {
 public:
  enum class Chart { Line, Squared };

  static Measure on_line(RealFn log_density, double lo, double hi, std::string label = {});
  static Measure squared(RealFn log_density_x, double x_lo, double x_hi, std::string label = {});

  Chart chart() const { return chart_; }
  /// Support in the polynomial variable.
  Interval support() const;
  const std::string& label() const { return label_; }
  double log_density_x(double x) const { return log_density_(x); }

  /// Quadrature for the measure restricted to J (polynomial variable), exact
  /// to roughly machine precision for polynomials up to 2*max_degree.
  /// Throws MomentDivergence when the tail does not decay fast enough.
  DiscreteMeasure discretize(Interval J, int max_degree) const;

 private:
  Measure(RealFn log_density, double lo, double hi, Chart chart, std::string label)
      : log_density_(std::move(log_density)), x_lo_(lo), x_hi_(hi), chart_(chart), label_(std::move(label)) {}

  RealFn log_density_;
  double x_lo_, x_hi_;  // in the integration variable x
  Chart chart_;
  std::string label_;
};

class OrthoSystem {
 public:
  /// Stieltjes procedure on a fine discretisation. max_degree <= 40.
  static OrthoSystem build(const Measure& measure, int max_degree);

  int max_degree() const { return max_degree_; }
  const Measure& measure() const { return measure_; }
  /// a_j for j < max_degree (diagonal of the Jacobi matrix).
  const std::vector<double>& recur_a() const { return a_; }
  /// b_j for 1 <= j <= max_degree; entry 0 is unused and set to 0.
  const std::vector<double>& recur_b() const { return b_; }
  double mass() const { return mass_; }

  /// p_0(y), ..., p_max(y).
  std::vector<double> eval_all(double y) const;
  double eval(int degree, double y) const;

 private:
  OrthoSystem(Measure m) : measure_(std::move(m)) {}
  Measure measure_;
  int max_degree_ = 0;
  double mass_ = 0.0;
  std::vector<double> a_, b_;
};

/// G_jk = integral over J of w p_j p_k for the listed degrees.
Matrix gram(const OrthoSystem& sys, Interval J, const std::vector<int>& indices);

}  // namespace rmtdec
