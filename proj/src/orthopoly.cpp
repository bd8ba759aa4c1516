#include "rmtdec/orthopoly.hpp"

#include "rmtdec/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rmtdec {

double DiscreteMeasure::mass() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

Measure Measure::on_line(RealFn log_density, double lo, double hi, std::string label) {
  if (!(lo < hi)) throw Error(ErrorCode::InvalidInterval, "measure support needs lo < hi");
  return {std::move(log_density), lo, hi, Chart::Line, std::move(label)};
}

Measure Measure::squared(RealFn log_density_x, double x_lo, double x_hi, std::string label) {
  if (!(x_lo < x_hi) || x_lo < 0.0)
    throw Error(ErrorCode::InvalidInterval, "squared chart needs 0 <= x_lo < x_hi");
  return {std::move(log_density_x), x_lo, x_hi, Chart::Squared, std::move(label)};
}

Interval Measure::support() const {
  if (chart_ == Chart::Line) return {x_lo_, x_hi_};
  return {x_lo_ * x_lo_, x_hi_ * x_hi_};
}

namespace {

// Maps t in R onto (lo, hi) so that algebraic endpoint behaviour and
// algebraic or faster tails become exponential decay in t.
struct Transform {
  enum Kind { Tanh, ExpUp, ExpDown, Sinh } kind;
  double lo, hi;

  double x(double t) const {
    switch (kind) {
      case Tanh: return 0.5 * (lo + hi) + 0.5 * (hi - lo) * std::tanh(t);
      case ExpUp: return lo + std::exp(t);
      case ExpDown: return hi - std::exp(-t);
      case Sinh: return std::sinh(t);
    }
    return 0.0;
  }
  double log_dx(double t) const {
    switch (kind) {
      case Tanh: {
        const double c = std::cosh(t);
        return std::log(0.5 * (hi - lo)) - 2.0 * std::log(c);
      }
      case ExpUp: return t;
      case ExpDown: return -t;
      case Sinh: return std::log(std::cosh(t));
    }
    return 0.0;
  }
  double t_max() const { return kind == Tanh ? 40.0 : 340.0; }
};

Transform choose_transform(double lo, double hi) {
  const bool flo = std::isfinite(lo), fhi = std::isfinite(hi);
  if (flo && fhi) return {Transform::Tanh, lo, hi};
  if (flo) return {Transform::ExpUp, lo, hi};
  if (fhi) return {Transform::ExpDown, lo, hi};
  return {Transform::Sinh, lo, hi};
}

constexpr double kStep = 0.25;
constexpr double kDecay = 41.5;  // log(1e18)
constexpr int kConfirmSteps = 8;
constexpr int kPanelOrder = 16;

}  // namespace

DiscreteMeasure Measure::discretize(Interval J, int max_degree) const {
  // Clip J (polynomial variable) to the support and move to x.
  double lo, hi;
  if (chart_ == Chart::Line) {
    lo = std::max(J.lo, x_lo_);
    hi = std::min(J.hi, x_hi_);
  } else {
    lo = std::max(J.lo <= 0.0 ? 0.0 : std::sqrt(J.lo), x_lo_);
    hi = std::min(J.hi == kInf ? kInf : (J.hi <= 0.0 ? 0.0 : std::sqrt(J.hi)), x_hi_);
  }
  DiscreteMeasure out;
  if (!(lo < hi)) return out;

  const Transform tr = choose_transform(lo, hi);
  const bool squared = chart_ == Chart::Squared;
  const double poly_power = 2.0 * std::max(max_degree, 0);
  // Log of density * dx, and the polynomial envelope exponent at the same t.
  auto log_base = [&](double t, double& envelope) {
    const double x = tr.x(t);
    envelope = 0.0;
    if (!(x > lo && x < hi)) return -kInf;
    const double y = squared ? x * x : x;
    envelope = poly_power * std::log1p(std::abs(y));
    return log_density_(x) + tr.log_dx(t);
  };

  // Both the mass and the highest moment must have decayed by kDecay.
  double env0;
  const double base0 = log_base(0.0, env0);
  double peak0 = base0, peak_hi = base0 + env0;
  auto scan = [&](double direction) {
    int quiet = 0;
    double t = 0.0;
    while (quiet < kConfirmSteps) {
      t += direction * kStep;
      if (std::abs(t) > tr.t_max()) {
        const bool finite_end = direction > 0 ? std::isfinite(hi) : std::isfinite(lo);
        std::ostringstream msg;
        msg << "weight " << label_ << " does not decay for polynomial degree " << max_degree
            << (finite_end ? " at a finite endpoint" : " in the tail");
        throw Error(finite_end ? ErrorCode::NonConvergence : ErrorCode::MomentDivergence, msg.str());
      }
      double env;
      const double v = log_base(t, env);
      if (std::isnan(v)) throw Error(ErrorCode::NonConvergence, "weight evaluated to NaN");
      if (v == kInf) throw Error(ErrorCode::NonConvergence, "weight is infinite inside support");
      peak0 = std::max(peak0, v);
      peak_hi = std::max(peak_hi, v + env);
      quiet = (v < peak0 - kDecay && v + env < peak_hi - kDecay) ? quiet + 1 : 0;
    }
    return t;
  };
  const double t_hi = scan(+1.0);
  const double t_lo = scan(-1.0);

  const int panels = static_cast<int>(std::ceil((t_hi - t_lo) / kStep));
  const QuadratureRule rule = composite_gauss_legendre(panels, kPanelOrder, t_lo, t_hi);
  out.nodes.reserve(rule.nodes.size());
  out.weights.reserve(rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double t = rule.nodes[i];
    const double x = tr.x(t);
    if (!(x > lo && x < hi)) continue;
    const double w = rule.weights[i] * std::exp(log_density_(x) + tr.log_dx(t));
    if (!(w > 0.0)) continue;
    out.nodes.push_back(squared ? x * x : x);
    out.weights.push_back(w);
  }
  return out;
}

OrthoSystem OrthoSystem::build(const Measure& measure, int max_degree) {
  if (max_degree < 0 || max_degree > 40)
    throw Error(ErrorCode::BadParameter, "orthogonal polynomial degree must be in [0, 40]");
  const DiscreteMeasure dm = measure.discretize(measure.support(), max_degree);
  if (dm.nodes.empty()) throw Error(ErrorCode::BadParameter, "measure has no mass");

  OrthoSystem sys(measure);
  sys.max_degree_ = max_degree;
  sys.mass_ = dm.mass();
  sys.a_.assign(max_degree, 0.0);
  sys.b_.assign(max_degree + 1, 0.0);

  const std::size_t N = dm.nodes.size();
  std::vector<double> prev(N, 0.0), cur(N, 1.0 / std::sqrt(sys.mass_)), next(N);
  for (int j = 0; j < max_degree; ++j) {
    double a = 0.0;
    for (std::size_t i = 0; i < N; ++i) a += dm.weights[i] * dm.nodes[i] * cur[i] * cur[i];
    // Second pass of Gram-Schmidt against p_j and p_{j-1} keeps orthogonality tight.
    double norm2 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      next[i] = (dm.nodes[i] - a) * cur[i] - sys.b_[j] * prev[i];
    }
    double c_cur = 0.0, c_prev = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      c_cur += dm.weights[i] * next[i] * cur[i];
      c_prev += dm.weights[i] * next[i] * prev[i];
    }
    a += c_cur;
    for (std::size_t i = 0; i < N; ++i) {
      next[i] -= c_cur * cur[i] + c_prev * prev[i];
      norm2 += dm.weights[i] * next[i] * next[i];
    }
    const double b = std::sqrt(norm2);
    if (!(b > 0.0) || !std::isfinite(b))
      throw Error(ErrorCode::NonConvergence, "Stieltjes procedure broke down");
    sys.a_[j] = a;
    sys.b_[j + 1] = b;
    for (std::size_t i = 0; i < N; ++i) next[i] /= b;
    std::swap(prev, cur);
    std::swap(cur, next);
  }
  return sys;
}

std::vector<double> OrthoSystem::eval_all(double y) const {
  std::vector<double> p(max_degree_ + 1);
  p[0] = 1.0 / std::sqrt(mass_);
  if (max_degree_ >= 1) p[1] = (y - a_[0]) * p[0] / b_[1];
  for (int j = 1; j < max_degree_; ++j) p[j + 1] = ((y - a_[j]) * p[j] - b_[j] * p[j - 1]) / b_[j + 1];
  return p;
}

double OrthoSystem::eval(int degree, double y) const {
  if (degree < 0 || degree > max_degree_)
    throw Error(ErrorCode::BadParameter, "polynomial degree outside built range");
  return eval_all(y)[degree];
}

Matrix gram(const OrthoSystem& sys, Interval J, const std::vector<int>& indices) {
  const int k = static_cast<int>(indices.size());
  Matrix G = Matrix::Zero(k, k);
  for (int idx : indices)
    if (idx < 0 || idx > sys.max_degree())
      throw Error(ErrorCode::BadParameter, "gram index outside built range");
  if (!(J.lo < J.hi)) return G;
  const DiscreteMeasure dm = sys.measure().discretize(J, sys.max_degree());
  for (std::size_t i = 0; i < dm.nodes.size(); ++i) {
    const std::vector<double> p = sys.eval_all(dm.nodes[i]);
    for (int r = 0; r < k; ++r)
      for (int c = 0; c <= r; ++c) G(r, c) += dm.weights[i] * p[indices[r]] * p[indices[c]];
  }
  for (int r = 0; r < k; ++r)
    for (int c = r + 1; c < k; ++c) G(r, c) = G(c, r);
  return G;
}

}  // namespace rmtdec
