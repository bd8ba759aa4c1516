#pragma once

// Gap probabilities E(k; J): Monte Carlo counts, beta = 2 Gram determinants,
// the exact odd-n beta = 1 generating function, brute-force quadrature, and
// the checkers for the gap identities.

#include "rmtdec/densities.hpp"
#include "rmtdec/orthopoly.hpp"
#include "rmtdec/report.hpp"
#include "rmtdec/samplers.hpp"

#include <string>
#include <vector>

namespace rmtdec {

/// coeffs[k] = E(k; J) for k = 0..n.
struct GapPolynomial {
  std::vector<double> coeffs;
  int n = 0;
  std::string interval;

  /// E(k); zero for k outside 0..n.
  double E(int k) const;
  /// sum_k (1 - xi)^k E(k).
  double generating(double xi) const;
  double total() const;
  /// Throws NonConvergence unless coefficients lie in [-1e-9, 1 + 1e-9] and sum to 1 within tol.
  void check(double tol = 1e-8) const;
};

/// Generating function prod_j (1 - xi lambda_j) of a determinantal process whose
/// restricted Gram matrix has eigenvalues lambda.
GapPolynomial gap_from_gram(const Matrix& gram_matrix, const std::string& interval = {});

// ---------------------------------------------------------------------------
// Monte Carlo

struct GapEstimate {
  std::vector<double> e;  // e[k], k = 0..k_max
  std::size_t count = 0;

  double E(int k) const { return k < 0 || k >= static_cast<int>(e.size()) ? 0.0 : e[k]; }
  /// Binomial standard error of E(k).
  double stderr_of(int k) const;
  /// Probability of the union of the listed (disjoint) counts, and its standard error.
  std::pair<double, double> sum(std::initializer_list<int> ks) const;
};

/// Per-draw number of points strictly inside J. k_max < 0 means the batch width.
GapEstimate gap_counts(const SampleBatch& batch, Interval J, int k_max = -1);
GapEstimate gap_mc(const EnsembleSpec& spec, Interval J, int k_max, std::size_t count, std::uint64_t seed,
                   const SampleOptions& options = {});

// ---------------------------------------------------------------------------
// beta = 2 engines

/// UE_n with weight `measure` (polynomial variable of the measure) on J.
GapPolynomial gap_ue_exact(const Measure& measure, int n, Interval J);
/// UE_n(w2) of an admissible weight.
GapPolynomial gap_ue_exact(const AdmissibleWeight& w, int n, Interval J);
/// chUE_m with weight `chiral` (on [0, omega)) on (0, s), via y = x^2.
GapPolynomial gap_chue_exact(const LogWeight& chiral, int m, double s);
/// chUE_m(x^(2 mu) w2) on (0, s).
GapPolynomial gap_chue_exact(const AdmissibleWeight& w, int mu, int m, double s);
/// CUE_n on (-theta, theta), Gram matrix sin((j-k) theta) / (pi (j-k)).
GapPolynomial gap_cue_exact(int n, double theta);

/// Angles of O^{+-}(n+1) on (0, theta), computed on the Cauchy image x = tan(theta/2):
/// O^+(n+1) is chUE with weight (1+x^2)^(-n) and ceil(n/2) points, O^-(n+1) the
/// one with x^2 (1+x^2)^(-n) and floor(n/2) points. The determinant sector that
/// realises each label is cauchy_chue_group(0 or 1, n).
GapPolynomial gap_orthogonal_exact(int sign, int n, double theta);

// ---------------------------------------------------------------------------
// Exact odd-n beta = 1

enum class GapMode { Direct, Gaudin };

struct GaudinData {
  Vector nus;  // eigenvalues of the odd-odd Gram matrix on (-s, s), ascending
  Matrix C;    // rows give q_{2j-1} = sum_k C_jk p_{2k-1}
};

/// Generating function of OE_n(w1), n = 2m + 1, on (-s, s) as det Y / theta.
/// The s-independent integrals are computed once per engine.
class OddGapEngine {
 public:
  OddGapEngine(const AdmissibleWeight& w, int n);

  int n() const { return n_; }
  int m() const { return m_; }
  const AdmissibleWeight& weight() const { return w_; }

  GaudinData gaudin(double s) const;
  /// Y (direct) or Y~ after the column operation (gaudin), (m+1) x (m+1).
  Matrix matrix(double s, double xi, GapMode mode) const;
  double generating(double s, double xi, GapMode mode) const;
  /// Coefficients E(k), k = 0..n. Evaluates at n + 2 Chebyshev nodes on [0, 2].
  GapPolynomial gaps(double s, GapMode mode = GapMode::Gaudin) const;
  /// Largest |E(k)| for k > n in the fit.
  double truncation_residual(double s, GapMode mode) const;

 private:
  struct Local;
  Local local(double s) const;
  Matrix assemble(const Local& loc, double xi, GapMode mode) const;
  std::vector<double> fit(double s, GapMode mode) const;

  AdmissibleWeight w_;
  int n_ = 1, m_ = 0;
  double theta_ = 0.0;
  OrthoSystem sys_;
  std::vector<double> full_;  // int w1 p_{2k-1} theta_1 over the support
};

GapPolynomial gap_oe_odd_exact(const AdmissibleWeight& w, int n, double s, GapMode mode = GapMode::Gaudin);

/// E(k; J) for OE_n(w1), k = 0..n, by nested quadrature of p_1 over every
/// ordered region with a fixed number of points left of, inside and right of J.
/// n <= 4.
std::vector<double> gap_oe_bruteforce(const LogWeight& w1, int n, Interval J, double rel_tol = 1e-9);
double gap_oe_bruteforce(const LogWeight& w1, int n, Interval J, int k, double rel_tol = 1e-9);

// ---------------------------------------------------------------------------
// Generating-function calculus

/// (1/(2k)! d^{2k} - 1/(2k+1)! d^{2k+1}) G at xi = 1, by differentiating the monomial form.
double b1_operator(const PolyCoeffs& g, int k);
/// (-1)^k / k! d^k G at xi = 1.
double b1_rhs(const PolyCoeffs& g, int k);
/// Monomial coefficients of G(1 - (xi - 1)^2), and of xi G(1 - (xi - 1)^2).
PolyCoeffs compose_b1(const PolyCoeffs& g, bool times_xi = false);

// ---------------------------------------------------------------------------
// Identity checkers

/// E_{n,1}(2k+mu-1) + E_{n,1}(2k+mu) on (-s, s) against E_{m,2}(k; (0, s^2); x^(mu-1/2) w2(sqrt x)).
/// Odd n: exact both sides, tolerance 1e-8. Even n: Monte Carlo (3 stderr) and,
/// for n <= 4 when `bruteforce`, quadrature (1e-5).
struct ThmGapOptions {
  std::size_t count = 100000;
  std::uint64_t seed = 1;
  bool bruteforce = true;
  SampleOptions sampling;
};
VerificationReport check_thm_gap(const AdmissibleWeight& w, int n, const std::vector<int>& ks,
                                 const std::vector<double>& s_values, const ThmGapOptions& options = {});

/// Structure E_{2m+1,1}(xi) = E(1-(xi-1)^2) + xi F(1-(xi-1)^2), E(xi) = prod (1 - xi nu),
/// checked on xi_grid; also E against the chUE generating function, and det Y against det Y~.
VerificationReport check_B1_structure(const AdmissibleWeight& w, int n, double s, const std::vector<double>& xi_grid);

/// Random polynomials of degree <= max_degree: both operator identities of the derivative lemma.
VerificationReport check_derivative_lemma(int trials, int max_degree, std::uint64_t seed);

/// A (w1, w2) pair on a common support for the superposition identities.
struct WeightPair {
  LogWeight w1;
  LogWeight w2;
  std::string label;
};

/// Laguerre e^{-x/2}, e^{-x} on (0, inf).
WeightPair pair_laguerre_even();
/// (1-x)^{(a-1)/2}, (1-x)^a on (0, 1).
WeightPair pair_jacobi_even(double a);
/// e^{-x^2/2}, e^{-x^2}.
WeightPair pair_gauss_odd();
/// x^{(a-1)/2} e^{-x/2}, x^a e^{-x} on (0, inf).
WeightPair pair_laguerre_odd(double a);
/// (1+x)^{(a-1)/2} (1-x)^{(b-1)/2}, (1+x)^a (1-x)^b on (-1, 1).
WeightPair pair_jacobi_odd(double a, double b);
/// (1+x^2)^{-(n+a+1)/2}, (1+x^2)^{-(n+a)}.
WeightPair pair_cauchy_odd(int n, double a);

struct McOptions {
  std::size_t count = 100000;
  std::uint64_t seed = 1;
  SampleOptions sampling;
};

/// E_{n,2}(k; (0, s); w2) = sum_j E_{n,1}(2k-j) (E_{n,1}(j) + E_{n,1}(j-1)) on (0, s)
/// with OE_n(w1) estimated from two independent batches; plus a battery for
/// even(OE_n u OE_n) against UE_n(w2).
VerificationReport check_identity_24(const WeightPair& pair, int n, const std::vector<int>& ks,
                                     const std::vector<double>& s_values, const McOptions& options = {});

/// Same with OE_n and OE_{n+1} and J_s = (lo, s) when lower, else (s, hi); plus a
/// battery for even(OE_n u OE_{n+1}) against UE_n(w2).
VerificationReport check_identity_24cp(const WeightPair& pair, int n, const std::vector<int>& ks,
                                       const std::vector<double>& s_values, bool lower, const McOptions& options = {});

/// CUE_n gap on (-theta, theta) against the sum-product of COE_n gaps.
VerificationReport check_8_31p(int n, const std::vector<int>& ks, const std::vector<double>& thetas,
                               const McOptions& options = {});

/// COE_n neighbouring-gap sums against the O^{+-nu}(n+1) gaps on (0, theta), nu = sgn(1/2 - mu).
VerificationReport check_thm_D4(int n, const std::vector<int>& ks, const std::vector<double>& thetas,
                                 const McOptions& options = {});

}  // namespace rmtdec
