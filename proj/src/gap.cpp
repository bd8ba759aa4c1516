#include "rmtdec/gap.hpp"

#include "rmtdec/decimation.hpp"
#include "rmtdec/error.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

namespace rmtdec {

namespace {

std::string interval_label(Interval J) {
  std::ostringstream os;
  os << "(" << J.lo << ", " << J.hi << ")";
  return os.str();
}

GapPolynomial trivial_gap(const std::string& label) {
  GapPolynomial g;
  g.coeffs = {1.0};
  g.n = 0;
  g.interval = label;
  return g;
}

double integral(const RealFn& f, double lo, double hi) {
  if (!(lo < hi)) return 0.0;
  IntegrationOptions opts;
  opts.rel_tol = 1e-12;
  opts.abs_tol = 1e-15;
  return integrate_adaptive(f, lo, hi, opts).value;
}

// Value and delta-method standard error of sum_ab M(a, b) EA(a) EB(b) for
// independent multinomial estimates.
std::pair<double, double> bilinear(const GapEstimate& A, const GapEstimate& B,
                                   const std::function<bool(int, int)>& M) {
  const int na = static_cast<int>(A.e.size()), nb = static_cast<int>(B.e.size());
  Vector ea(na), eb(nb);
  for (int i = 0; i < na; ++i) ea(i) = A.e[i];
  for (int i = 0; i < nb; ++i) eb(i) = B.e[i];
  Matrix m = Matrix::Zero(na, nb);
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < nb; ++b) m(a, b) = M(a, b) ? 1.0 : 0.0;
  const double value = ea.dot(m * eb);
  const Vector ga = m * eb, gb = m.transpose() * ea;
  auto quad = [](const Vector& g, const Vector& e, std::size_t count) {
    const double mean = g.dot(e);
    return (g.cwiseProduct(g).dot(e) - mean * mean) / static_cast<double>(std::max<std::size_t>(count, 1));
  };
  const double var = quad(ga, ea, A.count) + quad(gb, eb, B.count);
  return {value, std::sqrt(std::max(var, 0.0))};
}

std::string key(const std::string& base, int k, double s) {
  std::ostringstream os;
  os << base << "[k=" << k << ",s=" << s << "]";
  return os.str();
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace

// ---------------------------------------------------------------------------

double GapPolynomial::E(int k) const {
  return k < 0 || k >= static_cast<int>(coeffs.size()) ? 0.0 : coeffs[k];
}

double GapPolynomial::generating(double xi) const {
  double sum = 0.0, pw = 1.0;
  for (double c : coeffs) {
    sum += c * pw;
    pw *= 1.0 - xi;
  }
  return sum;
}

double GapPolynomial::total() const {
  double s = 0.0;
  for (double c : coeffs) s += c;
  return s;
}

void GapPolynomial::check(double tol) const {
  for (double c : coeffs)
    if (!(c >= -1e-9 && c <= 1.0 + 1e-9))
      throw Error(ErrorCode::NonConvergence, "gap probability outside [0, 1] on " + interval);
  if (std::abs(total() - 1.0) > tol) throw Error(ErrorCode::NonConvergence, "gap probabilities do not sum to 1");
}

GapPolynomial gap_from_gram(const Matrix& gram_matrix, const std::string& interval) {
  const int n = static_cast<int>(gram_matrix.rows());
  if (n == 0) return trivial_gap(interval);
  const SymmetricEigen eig = sym_eigen(gram_matrix);
  std::vector<double> c0(n), c1(n);
  for (int j = 0; j < n; ++j) {
    const double lam = std::clamp(eig.values(j), 0.0, 1.0);
    c0[j] = 1.0 - lam;
    c1[j] = lam;
  }
  GapPolynomial g;
  g.coeffs = expand_linear_product(c0, c1);
  g.n = n;
  g.interval = interval;
  return g;
}

// ---------------------------------------------------------------------------

double GapEstimate::stderr_of(int k) const {
  const double p = E(k);
  return count == 0 ? 0.0 : std::sqrt(p * (1.0 - p) / static_cast<double>(count));
}

std::pair<double, double> GapEstimate::sum(std::initializer_list<int> ks) const {
  double p = 0.0;
  for (int k : ks) p += E(k);
  const double se = count == 0 ? 0.0 : std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(count));
  return {p, se};
}

GapEstimate gap_counts(const SampleBatch& batch, Interval J, int k_max) {
  if (batch.size() == 0) throw Error(ErrorCode::EmptySample, "no draws to count");
  if (k_max < 0) k_max = batch.width;
  GapEstimate est;
  est.e.assign(k_max + 1, 0.0);
  est.count = batch.size();
  for (std::size_t i = 0; i < batch.size(); ++i) {
    int c = 0;
    for (double x : batch.row(i)) c += J.contains(x) ? 1 : 0;
    if (c <= k_max) est.e[c] += 1.0;
  }
  for (double& v : est.e) v /= static_cast<double>(est.count);
  return est;
}

GapEstimate gap_mc(const EnsembleSpec& spec, Interval J, int k_max, std::size_t count, std::uint64_t seed,
                   const SampleOptions& options) {
  return gap_counts(sample_ensemble(spec, count, seed, options), J, k_max);
}

// ---------------------------------------------------------------------------

GapPolynomial gap_ue_exact(const Measure& measure, int n, Interval J) {
  if (n < 0) throw Error(ErrorCode::BadParameter, "n must be >= 0");
  const std::string label = interval_label(J);
  if (n == 0) return trivial_gap(label);
  const OrthoSystem sys = OrthoSystem::build(measure, n - 1);
  std::vector<int> idx(n);
  for (int j = 0; j < n; ++j) idx[j] = j;
  const Interval sup = measure.support();
  const Interval clipped{std::max(J.lo, sup.lo), std::min(J.hi, sup.hi)};
  return gap_from_gram(gram(sys, clipped, idx), label);
}

GapPolynomial gap_ue_exact(const AdmissibleWeight& w, int n, Interval J) {
  return gap_ue_exact(Measure::on_line([w](double x) { return w.log_w2(x); }, -w.omega(), w.omega(), w.label()), n, J);
}

GapPolynomial gap_chue_exact(const LogWeight& chiral, int m, double s) {
  if (m < 0 || !(s >= 0.0)) throw Error(ErrorCode::BadParameter, "need m >= 0 and s >= 0");
  const std::string label = interval_label({0.0, s});
  if (m == 0) return trivial_gap(label);
  const Measure meas = Measure::squared(chiral.log_w, std::max(chiral.lo, 0.0), chiral.hi, chiral.label);
  const OrthoSystem sys = OrthoSystem::build(meas, m - 1);
  std::vector<int> idx(m);
  for (int j = 0; j < m; ++j) idx[j] = j;
  const double top = std::min(s, chiral.hi);
  const Interval J{0.0, std::isfinite(top) ? top * top : kInf};
  return gap_from_gram(gram(sys, J, idx), label);
}

GapPolynomial gap_chue_exact(const AdmissibleWeight& w, int mu, int m, double s) {
  return gap_chue_exact(chiral_weight(w, mu), m, s);
}

GapPolynomial gap_cue_exact(int n, double theta) {
  if (n < 1 || !(theta >= 0.0)) throw Error(ErrorCode::BadParameter, "need n >= 1 and theta >= 0");
  const double t = std::min(theta, std::numbers::pi);
  Matrix G(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      G(j, k) = j == k ? t / std::numbers::pi : std::sin((j - k) * t) / (std::numbers::pi * (j - k));
  return gap_from_gram(G, interval_label({-theta, theta}));
}

GapPolynomial gap_orthogonal_exact(int sign, int n, double theta) {
  if (n < 0 || (sign != 1 && sign != -1) || !(theta >= 0.0))
    throw Error(ErrorCode::BadParameter, "need sign = +-1, n >= 0, theta >= 0");
  const int mu = sign > 0 ? 0 : 1;
  const int m = mu == 0 ? (n + 1) / 2 : n / 2;
  const std::string label = interval_label({0.0, theta});
  if (m == 0) return trivial_gap(label);
  const double s = theta >= std::numbers::pi ? kInf : std::tan(0.5 * theta);
  LogWeight chiral{[mu, n](double x) {
                     if (mu == 1 && x == 0.0) return -kInf;
                     return (mu == 1 ? 2.0 * std::log(x) : 0.0) - n * std::log1p(x * x);
                   },
                   0.0, kInf, true, "cauchy-image"};
  GapPolynomial g = gap_chue_exact(chiral, m, s);
  g.interval = label;
  return g;
}

// ---------------------------------------------------------------------------
// Odd n, beta = 1

struct OddGapEngine::Local {
  double s = 0.0;
  double theta1 = 0.0;
  std::vector<double> T, As, g;
  Matrix G;
};

namespace {

OrthoSystem odd_system(const AdmissibleWeight& w, int m) {
  const double om = w.omega();
  return OrthoSystem::build(Measure::on_line([w](double x) { return w.log_w2(x); }, -om, om, w.label()),
                            std::max(2 * m - 1, 1));
}

}  // namespace

OddGapEngine::OddGapEngine(const AdmissibleWeight& w, int n)
    : w_(w), n_(n), m_((n - 1) / 2), theta_(w.theta()), sys_(odd_system(w, (n - 1) / 2)) {
  if (n < 1 || n % 2 == 0) throw Error(ErrorCode::BadParameter, "odd engine needs odd n >= 1");
  full_.resize(m_);
  for (int k = 0; k < m_; ++k) {
    const int deg = 2 * k + 1;
    full_[k] = 2.0 * integral([&](double x) { return w_.w1(x) * sys_.eval(deg, x) * w_.theta1(x); }, 0.0, w_.omega());
  }
}

OddGapEngine::Local OddGapEngine::local(double s) const {
  if (!(s >= 0.0)) throw Error(ErrorCode::BadParameter, "s must be >= 0");
  Local loc;
  loc.s = s;
  loc.T.assign(m_, 0.0);
  loc.As.assign(m_, 0.0);
  loc.g.assign(m_, 0.0);
  if (s >= w_.omega()) {
    loc.theta1 = theta_;
    loc.As = full_;
    loc.G = Matrix::Identity(m_, m_);
    return loc;
  }
  loc.theta1 = w_.theta1(s);
  const double comp = w_.companion(s);
  const std::vector<double> ps = sys_.eval_all(s);
  for (int k = 0; k < m_; ++k) {
    const int deg = 2 * k + 1;
    loc.T[k] = integral([&](double x) { return w_.w1(x) * sys_.eval(deg, x); }, s, w_.omega());
    loc.As[k] = 2.0 * integral([&](double x) { return w_.w1(x) * sys_.eval(deg, x) * w_.theta1(x); }, 0.0, s);
    loc.g[k] = comp * ps[deg];
  }
  std::vector<int> idx(m_);
  for (int k = 0; k < m_; ++k) idx[k] = 2 * k + 1;
  loc.G = m_ > 0 ? gram(sys_, {-s, s}, idx) : Matrix(0, 0);
  return loc;
}

GaudinData OddGapEngine::gaudin(double s) const {
  const Local loc = local(s);
  GaudinData d;
  if (m_ == 0) {
    d.nus = Vector(0);
    d.C = Matrix(0, 0);
    return d;
  }
  const SymmetricEigen eig = sym_eigen(loc.G);
  d.nus = eig.values;
  d.C = eig.vectors.transpose();
  return d;
}

Matrix OddGapEngine::assemble(const Local& loc, double xi, GapMode mode) const {
  const int m = m_;
  const double c = 2.0 * xi - xi * xi;
  const double S = 2.0 * loc.theta1;
  Matrix Y = Matrix::Zero(m + 1, m + 1);
  Y(0, m) = theta_ - xi * loc.theta1;
  if (m == 0) return Y;
  Vector A(m), As(m), T(m), g(m);
  for (int k = 0; k < m; ++k) {
    A(k) = full_[k];
    As(k) = loc.As[k];
    T(k) = loc.T[k];
    g(k) = loc.g[k];
  }
  if (mode == GapMode::Direct) {
    for (int k = 0; k < m; ++k) Y(0, k) = A(k) - c * (As(k) + T(k) * S) + xi * (1.0 - xi) * T(k) * S;
    for (int j = 0; j < m; ++j) {
      for (int k = 0; k < m; ++k) Y(j + 1, k) = 2.0 * xi * g(j) * T(k) - (j == k ? 1.0 : 0.0) + c * loc.G(j, k);
      Y(j + 1, m) = xi * g(j);
    }
    return Y;
  }
  const SymmetricEigen eig = sym_eigen(loc.G);
  const Matrix C = eig.vectors.transpose();
  const Vector At = C * A, Ast = C * As, Tt = C * T, gt = C * g;
  for (int k = 0; k < m; ++k) Y(0, k) = At(k) - 2.0 * theta_ * Tt(k) - c * Ast(k);
  for (int j = 0; j < m; ++j) {
    Y(j + 1, j) = -1.0 + c * eig.values(j);
    Y(j + 1, m) = xi * gt(j);
  }
  return Y;
}

Matrix OddGapEngine::matrix(double s, double xi, GapMode mode) const { return assemble(local(s), xi, mode); }

double OddGapEngine::generating(double s, double xi, GapMode mode) const {
  return determinant(matrix(s, xi, mode)) / theta_;
}

std::vector<double> OddGapEngine::fit(double s, GapMode mode) const {
  const Local loc = local(s);
  const std::vector<double> nodes = chebyshev_nodes(n_ + 2, 0.0, 2.0);
  std::vector<double> values(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) values[i] = determinant(assemble(loc, nodes[i], mode)) / theta_;
  return poly_from_samples(nodes, values).to(PolyBasis::OneMinusXi).coeffs;
}

GapPolynomial OddGapEngine::gaps(double s, GapMode mode) const {
  std::vector<double> c = fit(s, mode);
  c.resize(n_ + 1);
  GapPolynomial g;
  g.coeffs = std::move(c);
  g.n = n_;
  g.interval = interval_label({-s, s});
  return g;
}

double OddGapEngine::truncation_residual(double s, GapMode mode) const {
  const std::vector<double> c = fit(s, mode);
  double r = 0.0;
  for (std::size_t k = n_ + 1; k < c.size(); ++k) r = std::max(r, std::abs(c[k]));
  return r;
}

GapPolynomial gap_oe_odd_exact(const AdmissibleWeight& w, int n, double s, GapMode mode) {
  return OddGapEngine(w, n).gaps(s, mode);
}

// ---------------------------------------------------------------------------

std::vector<double> gap_oe_bruteforce(const LogWeight& w1, int n, Interval J, double rel_tol) {
  if (n < 1 || n > 4) throw Error(ErrorCode::BadParameter, "brute force needs 1 <= n <= 4");
  const double lo = w1.lo, hi = w1.hi;
  const double jl = std::max(J.lo, lo), jh = std::min(J.hi, hi);
  auto log_f = [&](std::span<const double> x) { return log_p_beta(w1, 1, x); };
  // A symmetric weight on a symmetric J gives split (l, k, r) the mass of (r, k, l).
  bool mirror = lo == -hi && jl == -jh;
  for (double x : {0.3, 0.9, 1.7, 4.2})
    if (mirror && w1.in_support(x)) mirror = std::abs(w1.log_w(x) - w1.log_w(-x)) < 1e-13 * (1.0 + std::abs(w1.log_w(x)));
  std::vector<double> e(n + 1, 0.0);
  double total = 0.0;
  for (int l = 0; l <= n; ++l)
    for (int k = 0; l + k <= n; ++k) {
      const int r = n - l - k;
      if (mirror && l > r) continue;
      if ((l > 0 && !(lo < jl)) || (k > 0 && !(jl < jh)) || (r > 0 && !(jh < hi))) continue;
      OrderedRegion region;
      for (int i = 0; i < l; ++i) region.lo.push_back(lo), region.hi.push_back(jl);
      for (int i = 0; i < k; ++i) region.lo.push_back(jl), region.hi.push_back(jh);
      for (int i = 0; i < r; ++i) region.lo.push_back(jh), region.hi.push_back(hi);
      const double v = (mirror && l < r ? 2.0 : 1.0) * integrate_ordered(log_f, region, rel_tol, w1.log_w);
      e[k] += v;
      total += v;
    }
  for (double& v : e) v /= total;
  return e;
}

double gap_oe_bruteforce(const LogWeight& w1, int n, Interval J, int k, double rel_tol) {
  if (k < 0 || k > n) return 0.0;
  return gap_oe_bruteforce(w1, n, J, rel_tol)[k];
}

// ---------------------------------------------------------------------------

namespace {

std::vector<long double> monomial(const PolyCoeffs& g) {
  const PolyCoeffs m = g.basis == PolyBasis::Monomial ? g : g.to(PolyBasis::Monomial);
  return {m.coeffs.begin(), m.coeffs.end()};
}

long double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0L;
  long double r = 1.0L;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// (1/j!) d^j at xi = 1 of a monomial-form polynomial.
long double taylor_at_one(const std::vector<long double>& c, int j) {
  long double s = 0.0L;
  for (int i = 0; i < static_cast<int>(c.size()); ++i) s += binom(i, j) * c[i];
  return s;
}

}  // namespace

double b1_operator(const PolyCoeffs& g, int k) {
  const auto c = monomial(g);
  return static_cast<double>(taylor_at_one(c, 2 * k) - taylor_at_one(c, 2 * k + 1));
}

double b1_rhs(const PolyCoeffs& g, int k) {
  const auto c = monomial(g);
  return static_cast<double>((k % 2 == 0 ? 1.0L : -1.0L) * taylor_at_one(c, k));
}


namespace {

std::vector<long double> compose_ld(const std::vector<long double>& c, bool times_xi) {
  std::vector<long double> out(2 * c.size() + 1, 0.0L), pw{1.0L};
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t d = 0; d < pw.size(); ++d) out[d] += c[i] * pw[d];
    std::vector<long double> next(pw.size() + 2, 0.0L);
    for (std::size_t d = 0; d < pw.size(); ++d) {
      next[d + 1] += 2.0L * pw[d];
      next[d + 2] -= pw[d];
    }
    pw = std::move(next);
  }
  if (times_xi) out.insert(out.begin(), 0.0L);
  while (out.size() > 1 && out.back() == 0.0L) out.pop_back();
  return out;
}

long double b1_operator_ld(const std::vector<long double>& c, int k) {
  return taylor_at_one(c, 2 * k) - taylor_at_one(c, 2 * k + 1);
}

long double b1_rhs_ld(const std::vector<long double>& c, int k) {
  return (k % 2 == 0 ? 1.0L : -1.0L) * taylor_at_one(c, k);
}

// Binomial standard error under the exact value, floored by the estimate's own.
double null_se(double exact, double se_est, std::size_t count) {
  const double p = std::clamp(exact, 0.0, 1.0);
  return std::max(se_est, std::sqrt(p * (1.0 - p) / static_cast<double>(std::max<std::size_t>(count, 1))));
}

}  // namespace

PolyCoeffs compose_b1(const PolyCoeffs& g, bool times_xi) {
  const auto out = compose_ld(monomial(g), times_xi);
  PolyCoeffs r;
  r.basis = PolyBasis::Monomial;
  r.coeffs.assign(out.begin(), out.end());
  return r;
}

// ---------------------------------------------------------------------------

VerificationReport check_thm_gap(const AdmissibleWeight& w, int n, const std::vector<int>& ks,
                                 const std::vector<double>& s_values, const ThmGapOptions& options) {
  VerificationReport rep;
  rep.identity = "thm_gap";
  rep.param("weight", w.label());
  rep.param("n", n);
  const int mu = n % 2, m = n / 2;
  if (n % 2 == 1) {
    const OddGapEngine engine(w, n);
    for (double s : s_values) {
      const GapPolynomial lhs = engine.gaps(s);
      const GapPolynomial rhs = gap_chue_exact(w, mu, m, s);
      for (int k : ks)
        rep.add_residual(key("exact", k, s), lhs.E(2 * k + mu - 1) + lhs.E(2 * k + mu), rhs.E(k), 1e-8);
    }
    return rep;
  }
  rep.param("count", static_cast<long long>(options.count));
  EnsembleSpec spec;
  spec.kind = EnsembleKind::OE;
  spec.n = n;
  spec.weight = w;
  const SampleBatch batch = sample_ensemble(spec, options.count, options.seed, options.sampling);
  for (double s : s_values) {
    const GapPolynomial rhs = gap_chue_exact(w, mu, m, s);
    const GapEstimate est = gap_counts(batch, {-s, s}, n);
    std::vector<double> bf;
    if (options.bruteforce && n <= 4) bf = gap_oe_bruteforce(log_weight_w1(w), n, {-s, s}, 1e-7);
    for (int k : ks) {
      const auto [p, se] = est.sum({2 * k + mu - 1, 2 * k + mu});
      rep.add_z(key("mc", k, s), p, rhs.E(k), null_se(rhs.E(k), se, est.count));
      if (!bf.empty()) {
        const int a = 2 * k + mu - 1, b = 2 * k + mu;
        const double lhs = (a >= 0 && a <= n ? bf[a] : 0.0) + (b <= n ? bf[b] : 0.0);
        rep.add_residual(key("quadrature", k, s), lhs, rhs.E(k), 1e-5);
      }
    }
  }
  return rep;
}

VerificationReport check_B1_structure(const AdmissibleWeight& w, int n, double s, const std::vector<double>& xi_grid) {
  VerificationReport rep;
  rep.identity = "B1_structure";
  rep.param("weight", w.label());
  rep.param("n", n);
  rep.param("s", s);
  const OddGapEngine engine(w, n);
  const int m = engine.m();
  const GaudinData gd = engine.gaudin(s);
  const GapPolynomial chue = gap_chue_exact(w, 1, m, s);
  auto e_even = [&](double z) {
    double p = 1.0;
    for (int j = 0; j < m; ++j) p *= 1.0 - z * gd.nus(j);
    return p;
  };
  const int rows = static_cast<int>(xi_grid.size());
  Matrix A(rows, m + 1);
  Vector b(rows), y(rows);
  double det_res = 0.0, chue_res = 0.0;
  for (int i = 0; i < rows; ++i) {
    const double xi = xi_grid[i], z = 1.0 - (xi - 1.0) * (xi - 1.0);
    y(i) = engine.generating(s, xi, GapMode::Gaudin);
    det_res = std::max(det_res, std::abs(y(i) - engine.generating(s, xi, GapMode::Direct)));
    chue_res = std::max(chue_res, std::abs(e_even(z) - chue.generating(z)));
    double pw = 1.0;
    for (int j = 0; j <= m; ++j, pw *= z) A(i, j) = xi * pw;
    b(i) = y(i) - e_even(z);
  }
  const Vector f = A.colPivHouseholderQr().solve(b);
  const double fit_res = (A * f - b).cwiseAbs().maxCoeff();
  rep.add_residual("direct_vs_gaudin", det_res, 0.0, 1e-9);
  rep.add_residual("gaudin_vs_chue", chue_res, 0.0, 1e-9);
  rep.add_residual("structure_fit", fit_res, 0.0, 1e-9);
  return rep;
}

VerificationReport check_derivative_lemma(int trials, int max_degree, std::uint64_t seed) {
  VerificationReport rep;
  rep.identity = "derivative_lemma";
  rep.param("trials", trials);
  rep.param("max_degree", max_degree);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> deg(0, max_degree);
  double r1 = 0.0, r2 = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::vector<long double> g(deg(rng) + 1);
    for (auto& c : g) c = u(rng);
    const auto h = compose_ld(g, false), hx = compose_ld(g, true);
    for (int k = 0; k <= static_cast<int>(g.size()); ++k) {
      r1 = std::max(r1, static_cast<double>(std::abs(b1_operator_ld(h, k) - b1_rhs_ld(g, k))));
      r2 = std::max(r2, static_cast<double>(std::abs(b1_operator_ld(hx, k))));
    }
  }
  rep.add_residual("even_part", r1, 0.0, 1e-12);
  rep.add_residual("odd_part", r2, 0.0, 1e-12);
  return rep;
}

// ---------------------------------------------------------------------------

WeightPair pair_laguerre_even() {
  return {custom_weight([](double x) { return -0.5 * x; }, 0.0, kInf, "e^{-x/2}"),
          custom_weight([](double x) { return -x; }, 0.0, kInf, "e^{-x}"), "laguerre-even"};
}

WeightPair pair_jacobi_even(double a) {
  if (!(a > -1.0)) throw Error(ErrorCode::BadParameter, "need a > -1");
  return {custom_weight([a](double x) { return 0.5 * (a - 1.0) * std::log1p(-x); }, 0.0, 1.0, "(1-x)^{(a-1)/2}"),
          custom_weight([a](double x) { return a * std::log1p(-x); }, 0.0, 1.0, "(1-x)^a"),
          "jacobi-even(a=" + std::to_string(a) + ")"};
}

WeightPair pair_gauss_odd() {
  return {custom_weight([](double x) { return -0.5 * x * x; }, -kInf, kInf, "e^{-x^2/2}"),
          custom_weight([](double x) { return -x * x; }, -kInf, kInf, "e^{-x^2}"), "gauss-odd"};
}

WeightPair pair_laguerre_odd(double a) {
  if (!(a > -1.0)) throw Error(ErrorCode::BadParameter, "need a > -1");
  return {custom_weight([a](double x) { return 0.5 * (a - 1.0) * std::log(x) - 0.5 * x; }, 0.0, kInf,
                        "x^{(a-1)/2} e^{-x/2}"),
          custom_weight([a](double x) { return a * std::log(x) - x; }, 0.0, kInf, "x^a e^{-x}"),
          "laguerre-odd(a=" + std::to_string(a) + ")"};
}

WeightPair pair_jacobi_odd(double a, double b) {
  if (!(a > -1.0 && b > -1.0)) throw Error(ErrorCode::BadParameter, "need a, b > -1");
  return {custom_weight(
              [a, b](double x) { return 0.5 * (a - 1.0) * std::log1p(x) + 0.5 * (b - 1.0) * std::log1p(-x); }, -1.0,
              1.0, "(1+x)^{(a-1)/2} (1-x)^{(b-1)/2}"),
          custom_weight([a, b](double x) { return a * std::log1p(x) + b * std::log1p(-x); }, -1.0, 1.0,
                        "(1+x)^a (1-x)^b"),
          "jacobi-odd(a=" + std::to_string(a) + ",b=" + std::to_string(b) + ")"};
}

WeightPair pair_cauchy_odd(int n, double a) {
  const double e1 = 0.5 * (n + a + 1.0), e2 = n + a;
  return {custom_weight([e1](double x) { return -e1 * std::log1p(x * x); }, -kInf, kInf, "(1+x^2)^{-(n+a+1)/2}"),
          custom_weight([e2](double x) { return -e2 * std::log1p(x * x); }, -kInf, kInf, "(1+x^2)^{-(n+a)}"),
          "cauchy-odd(n=" + std::to_string(n) + ",a=" + std::to_string(a) + ")"};
}

namespace {

SampleBatch sample_custom(EnsembleKind kind, const LogWeight& w, int n, std::size_t count, std::uint64_t seed,
                          const SampleOptions& opts) {
  EnsembleSpec spec;
  spec.kind = kind;
  spec.n = n;
  spec.custom = w;
  return sample_ensemble(spec, count, seed, opts);
}

std::vector<double> even_of_superposition(const SampleBatch& a, const SampleBatch& b) {
  std::vector<double> out;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    const auto sp = superpose(a.row(i), b.row(i));
    const auto d = decimate(sp);
    out.insert(out.end(), d.even.begin(), d.even.end());
  }
  return out;
}

VerificationReport superposition_check(const std::string& name, const WeightPair& pair, int n, int n_b,
                                       const std::vector<int>& ks, const std::vector<double>& s_values, bool lower,
                                       int shift, const McOptions& options) {
  VerificationReport rep;
  rep.identity = name;
  rep.param("pair", pair.label);
  rep.param("n", n);
  rep.param("count", static_cast<long long>(options.count));
  if (name == "identity_24cp") rep.param("side", lower ? "lower" : "upper");
  const SampleBatch A = sample_custom(EnsembleKind::OE, pair.w1, n, options.count, derive_seed(options.seed, 1),
                                      options.sampling);
  const SampleBatch B = sample_custom(EnsembleKind::OE, pair.w1, n_b, options.count, derive_seed(options.seed, 2),
                                      options.sampling);
  const Measure meas = Measure::on_line(pair.w2.log_w, pair.w2.lo, pair.w2.hi, pair.w2.label);
  for (double s : s_values) {
    const Interval J = lower ? Interval{pair.w1.lo, s} : Interval{s, pair.w1.hi};
    const GapPolynomial exact = gap_ue_exact(meas, n, J);
    const GapEstimate ea = gap_counts(A, J, n), eb = gap_counts(B, J, n_b);
    for (int k : ks) {
      const int top = 2 * k + shift;
      const auto [v, se] = bilinear(ea, eb, [top](int a, int b) { return a + b == top || a + b == top - 1; });
      rep.add_z(key("gap", k, s), exact.E(k), v, null_se(exact.E(k), se, ea.count));
    }
  }
  const SampleBatch U =
      sample_custom(EnsembleKind::UE, pair.w2, n, options.count, derive_seed(options.seed, 3), options.sampling);
  const std::vector<double> ev = even_of_superposition(A, B);
  rep.add_battery(compare_spectra(ev, U.values, n, derive_seed(options.seed, 4), "even"));
  return rep;
}

}  // namespace

VerificationReport check_identity_24(const WeightPair& pair, int n, const std::vector<int>& ks,
                                     const std::vector<double>& s_values, const McOptions& options) {
  return superposition_check("identity_24", pair, n, n, ks, s_values, true, 0, options);
}

VerificationReport check_identity_24cp(const WeightPair& pair, int n, const std::vector<int>& ks,
                                       const std::vector<double>& s_values, bool lower, const McOptions& options) {
  return superposition_check("identity_24cp", pair, n, n + 1, ks, s_values, lower, 1, options);
}

VerificationReport check_8_31p(int n, const std::vector<int>& ks, const std::vector<double>& thetas,
                               const McOptions& options) {
  VerificationReport rep;
  rep.identity = "cue_from_coe";
  rep.param("n", n);
  rep.param("count", static_cast<long long>(options.count));
  EnsembleSpec spec;
  spec.kind = EnsembleKind::COE;
  spec.n = n;
  const SampleBatch A = sample_ensemble(spec, options.count, derive_seed(options.seed, 1), options.sampling);
  const SampleBatch B = sample_ensemble(spec, options.count, derive_seed(options.seed, 2), options.sampling);
  for (double t : thetas) {
    const GapPolynomial exact = gap_cue_exact(n, t);
    const GapEstimate ea = gap_counts(A, {-t, t}, n), eb = gap_counts(B, {-t, t}, n);
    for (int k : ks) {
      const auto [v, se] = bilinear(ea, eb, [k](int a, int b) {
        const int j = b / 2;
        return j <= k && (a == 2 * (k - j) || a == 2 * (k - j) - 1);
      });
      rep.add_z(key("gap", k, t), exact.E(k), v, null_se(exact.E(k), se, ea.count));
    }
  }
  return rep;
}

VerificationReport check_thm_D4(int n, const std::vector<int>& ks, const std::vector<double>& thetas,
                                const McOptions& options) {
  VerificationReport rep;
  rep.identity = "coe_orthogonal";
  rep.param("n", n);
  rep.param("count", static_cast<long long>(options.count));
  EnsembleSpec spec;
  spec.kind = EnsembleKind::COE;
  spec.n = n;
  const SampleBatch A = sample_ensemble(spec, options.count, options.seed, options.sampling);
  const int mu = n % 2;
  const int nu = mu == 0 ? 1 : -1;
  for (double t : thetas) {
    const GapEstimate est = gap_counts(A, {-t, t}, n);
    const GapPolynomial same = gap_orthogonal_exact(nu, n, t), other = gap_orthogonal_exact(-nu, n, t);
    for (int k : ks) {
      const auto [p1, se1] = est.sum({2 * k - 1 + mu, 2 * k + mu});
      rep.add_z(key("same_sign", k, t), p1, same.E(k), null_se(same.E(k), se1, est.count));
      const auto [p2, se2] = est.sum({2 * k - mu, 2 * k + 1 - mu});
      rep.add_z(key("opposite_sign", k, t), p2, other.E(k), null_se(other.E(k), se2, est.count));
    }
  }
  return rep;
}

}  // namespace rmtdec
