#pragma once

// Shared numerical kernels: quadrature, symmetric eigendecomposition,
// determinants and polynomial basis handling.

#include <Eigen/Dense>

#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace rmtdec {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RealFn = std::function<double(double)>;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool finite() const { return std::isfinite(lo) && std::isfinite(hi); }
  double length() const { return hi - lo; }
  bool contains(double x) const { return lo < x && x < hi; }
};

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  Interval interval;

  template <class F>
  double apply(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }
};

/// n-point Gauss-Legendre rule on the finite interval [lo, hi].
QuadratureRule gauss_legendre(int n, double lo = -1.0, double hi = 1.0);

/// Composite Gauss-Legendre: `panels` equal panels with `order` nodes each.
QuadratureRule composite_gauss_legendre(int panels, int order, double lo, double hi);

struct IntegrationOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_depth = 40;
  int max_segments = 20000;
};

struct IntegrationResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature with bisection.
/// Infinite endpoints are handled through x = tan(u).
/// Throws Error{InvalidInterval} if lo >= hi and Error{NonConvergence} if the
/// error target is not met before a segment reaches max_depth.
IntegrationResult integrate_adaptive(const RealFn& f, double lo, double hi,
                                     const IntegrationOptions& options = {});

double integrate(const RealFn& f, double lo, double hi, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Nested quadrature over ordered regions.

/// x_1 < x_2 < ... < x_n with x_k in (max(x_{k-1}, lo[k]), hi[k]).
struct OrderedRegion {
  std::vector<double> lo;
  std::vector<double> hi;

  int dim() const { return static_cast<int>(lo.size()); }
  /// lo < x_1 < ... < x_n < hi.
  static OrderedRegion simplex(int n, double lo, double hi);
};

using OrderedVisitor = std::function<void(std::span<const double> x, double weight)>;

/// Calls visit(x, w) on every node of a nested product rule with step h.
/// Finite coordinates use tanh-sinh. Infinite ones are truncated where
/// site_log_weight falls below -50 and use composite Gauss-Legendre panels of
/// width 6h; without a light tail they use tanh-sinh in atan(x). Nodes where
/// site_log_weight drops below -700 are pruned together with their subtree.
void visit_ordered_nodes(const OrderedRegion& region, double h, const OrderedVisitor& visit,
                         const RealFn& site_log_weight = {});

/// Integral of exp(log_f) over the region, refining h until two successive
/// values agree to rel_tol. Throws NonConvergence below h = 1/24.
double integrate_ordered(const std::function<double(std::span<const double>)>& log_f, const OrderedRegion& region,
                         double rel_tol = 1e-8, const RealFn& site_log_weight = {});

// ---------------------------------------------------------------------------
// Linear algebra

struct SymmetricEigen {
  Vector values;   // ascending
  Matrix vectors;  // columns are orthonormal eigenvectors
};

/// Throws Error{NotSymmetric} when asymmetry exceeds 1e-12 relative.
SymmetricEigen sym_eigen(const Matrix& m);

double determinant(const Matrix& m);

// ---------------------------------------------------------------------------
// Polynomials in a generating-function variable xi.

enum class PolyBasis {
  Monomial,    // sum c_k xi^k
  OneMinusXi,  // sum c_k (1 - xi)^k
};

struct PolyCoeffs {
  PolyBasis basis = PolyBasis::Monomial;
  std::vector<double> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  double operator()(double xi) const;

  /// Exact change of basis by binomial expansion; the map is an involution.
  PolyCoeffs to(PolyBasis target) const;
};

/// Interpolating polynomial through (nodes[i], values[i]), monomial basis.
/// Throws Error{DuplicateNodes}.
PolyCoeffs poly_from_samples(std::span<const double> nodes, std::span<const double> values);

/// Chebyshev points of the first kind mapped to [lo, hi].
std::vector<double> chebyshev_nodes(int count, double lo, double hi);

/// Coefficients of prod_j (c0_j + c1_j * u) in powers of u.
std::vector<double> expand_linear_product(std::span<const double> c0, std::span<const double> c1);

}  // namespace rmtdec
