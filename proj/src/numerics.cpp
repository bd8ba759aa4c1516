#include "rmtdec/numerics.hpp"

#include "rmtdec/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>

namespace rmtdec {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::InvalidInterval: return "InvalidInterval";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::DuplicateNodes: return "DuplicateNodes";
    case ErrorCode::OutOfSupport: return "OutOfSupport";
    case ErrorCode::OrderExceeded: return "OrderExceeded";
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::MomentDivergence: return "MomentDivergence";
    case ErrorCode::InterlacingViolated: return "InterlacingViolated";
    case ErrorCode::StuckChain: return "StuckChain";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::PoleAtPi: return "PoleAtPi";
  }
  return "Unknown";
}

QuadratureRule gauss_legendre(int n, double lo, double hi) {
  if (n < 1) throw Error(ErrorCode::BadParameter, "Gauss-Legendre order must be >= 1");
  if (!(lo < hi)) throw Error(ErrorCode::InvalidInterval, "Gauss-Legendre needs lo < hi");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  rule.interval = {lo, hi};
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute the derivative at the converged root for the weight.
    double p1 = 1.0, p2 = 0.0;
    for (int j = 1; j <= n; ++j) {
      const double p3 = p2;
      p2 = p1;
      p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
    }
    dp = n * (z * p1 - p2) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = mid - half * z;
    rule.nodes[n - 1 - i] = mid + half * z;
    rule.weights[i] = half * w;
    rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

QuadratureRule composite_gauss_legendre(int panels, int order, double lo, double hi) {
  if (panels < 1) throw Error(ErrorCode::BadParameter, "panel count must be >= 1");
  const QuadratureRule ref = gauss_legendre(order);
  QuadratureRule rule;
  rule.interval = {lo, hi};
  rule.nodes.reserve(static_cast<std::size_t>(panels) * order);
  rule.weights.reserve(rule.nodes.capacity());
  const double width = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double a = lo + p * width;
    const double mid = a + 0.5 * width;
    for (int i = 0; i < order; ++i) {
      rule.nodes.push_back(mid + 0.5 * width * ref.nodes[i]);
      rule.weights.push_back(0.5 * width * ref.weights[i]);
    }
  }
  return rule;
}

namespace {

constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  double value;
  double error;
  double abs_value;
  int depth;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <class G>
Segment gk15(const G& g, double a, double b, int depth) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = g(c);
  double kron = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double absv = std::abs(fc) * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = g(c - dx);
    const double f2 = g(c + dx);
    kron += kWgk[j] * (f1 + f2);
    absv += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  return {a, b, kron * h, std::abs((kron - gauss) * h), absv * std::abs(h), depth};
}

}  // namespace

IntegrationResult integrate_adaptive(const RealFn& f, double lo, double hi,
                                     const IntegrationOptions& options) {
  if (std::isnan(lo) || std::isnan(hi) || !(lo < hi))
    throw Error(ErrorCode::InvalidInterval, "integration interval needs lo < hi");

  int evaluations = 0;
  std::function<double(double)> g;
  double a = lo, b = hi;
  if (std::isfinite(lo) && std::isfinite(hi)) {
    g = [&](double x) {
      ++evaluations;
      return f(x);
    };
  } else {
    a = std::isfinite(lo) ? std::atan(lo) : -0.5 * std::numbers::pi;
    b = std::isfinite(hi) ? std::atan(hi) : 0.5 * std::numbers::pi;
    g = [&](double u) {
      ++evaluations;
      const double c = std::cos(u);
      const double x = std::tan(u);
      const double fx = f(x);
      if (fx == 0.0) return 0.0;
      return fx / (c * c);
    };
  }

  std::priority_queue<Segment> heap;
  Segment first = gk15(g, a, b, 0);
  double total = first.value, total_err = first.error, total_abs = first.abs_value;
  heap.push(first);
  auto converged = [&] {
    const double target = std::max(options.abs_tol, options.rel_tol * std::abs(total));
    const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * total_abs;
    return total_err <= target || total_err <= roundoff;
  };
  int segments = 1;
  while (!converged()) {
    Segment worst = heap.top();
    if (worst.depth >= options.max_depth || segments >= options.max_segments) {
      std::ostringstream msg;
      msg << "adaptive quadrature on (" << lo << ", " << hi << ") stalled at error " << total_err
          << " for value " << total;
      throw Error(ErrorCode::NonConvergence, msg.str());
    }
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Segment left = gk15(g, worst.a, mid, worst.depth + 1);
    Segment right = gk15(g, mid, worst.b, worst.depth + 1);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    total_abs += left.abs_value + right.abs_value - worst.abs_value;
    heap.push(left);
    heap.push(right);
    ++segments;
  }
  // Re-sum to avoid drift from incremental updates.
  double value = 0.0, err = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  return {value, err, evaluations};
}

double integrate(const RealFn& f, double lo, double hi, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::BadParameter, "tolerance must be positive");
  IntegrationOptions opts;
  opts.rel_tol = tol;
  return integrate_adaptive(f, lo, hi, opts).value;
}

// ---------------------------------------------------------------------------

SymmetricEigen sym_eigen(const Matrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::NotSymmetric, "matrix is not square");
  const double scale = std::max(m.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    std::ostringstream msg;
    msg << "asymmetry " << asym << " exceeds tolerance for scale " << scale;
    throw Error(ErrorCode::NotSymmetric, msg.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.transpose()));
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double determinant(const Matrix& m) {
  if (m.rows() == 0) return 1.0;
  return m.partialPivLu().determinant();
}

// ---------------------------------------------------------------------------

double PolyCoeffs::operator()(double xi) const {
  const double t = basis == PolyBasis::Monomial ? xi : 1.0 - xi;
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
  return acc;
}

PolyCoeffs PolyCoeffs::to(PolyBasis target) const {
  if (target == basis) return *this;
  // c(t) with t = 1 - s; both directions are the same substitution.
  const std::size_t n = coeffs.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double binom = 1.0;  // C(j, k)
    for (std::size_t k = 0; k <= j; ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      out[k] += sign * binom * coeffs[j];
      binom = binom * static_cast<double>(j - k) / static_cast<double>(k + 1);
    }
  }
  return {target, std::move(out)};
}

PolyCoeffs poly_from_samples(std::span<const double> nodes, std::span<const double> values) {
  const std::size_t n = nodes.size();
  if (n == 0 || values.size() != n)
    throw Error(ErrorCode::BadParameter, "need matching, non-empty node and value lists");
  double spread = 0.0;
  for (double x : nodes) spread = std::max(spread, std::abs(x));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(nodes[i] - nodes[j]) <= 1e-14 * std::max(1.0, spread))
        throw Error(ErrorCode::DuplicateNodes, "interpolation nodes must be distinct");

  // Newton divided differences, then expansion into the monomial basis.
  std::vector<double> dd(values.begin(), values.end());
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t i = n - 1; i >= level; --i)
      dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - level]);

  std::vector<double> coeffs(n, 0.0);
  // Horner on the Newton form: p = dd[n-1]; p = p*(x - x_k) + dd[k].
  coeffs[0] = dd[n - 1];
  std::size_t deg = 0;
  for (std::size_t k = n - 1; k-- > 0;) {
    // multiply by (x - nodes[k])
    ++deg;
    for (std::size_t i = deg; i > 0; --i) coeffs[i] = coeffs[i - 1] - nodes[k] * coeffs[i];
    coeffs[0] = -nodes[k] * coeffs[0] + dd[k];
  }
  return {PolyBasis::Monomial, std::move(coeffs)};
}

std::vector<double> chebyshev_nodes(int count, double lo, double hi) {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) {
    const double z = std::cos(std::numbers::pi * (2.0 * i + 1.0) / (2.0 * count));
    out[i] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * z;
  }
  return out;
}

std::vector<double> expand_linear_product(std::span<const double> c0, std::span<const double> c1) {
  std::vector<double> out{1.0};
  for (std::size_t j = 0; j < c0.size(); ++j) {
    std::vector<double> next(out.size() + 1, 0.0);
    for (std::size_t k = 0; k < out.size(); ++k) {
      next[k] += c0[j] * out[k];
      next[k + 1] += c1[j] * out[k];
    }
    out = std::move(next);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct DeNode {
  double x;
  double w;
};

// tanh-sinh nodes for the finite interval (a, b) at step h.
std::vector<DeNode> tanh_sinh_nodes(double a, double b, double h) {
  const double hp = 0.5 * std::numbers::pi;
  const double d = 0.5 * (b - a);
  const int kmax = static_cast<int>(std::ceil(3.2 / h));
  std::vector<DeNode> out;
  out.reserve(2 * kmax + 1);
  for (int k = -kmax; k <= kmax; ++k) {
    const double t = k * h;
    const double u = hp * std::sinh(t);
    const double ch = std::cosh(u);
    const double w = h * d * hp * std::cosh(t) / (ch * ch);
    // Distance to the nearer end, without cancellation.
    const double gap = 2.0 * d / (1.0 + std::exp(2.0 * std::abs(u)));
    const double x = u >= 0.0 ? b - gap : a + gap;
    if (x > a && x < b && w > 0.0) out.push_back({x, w});
  }
  return out;
}

// Coordinates with an infinite bound are either truncated where the site
// weight is negligible (light tails, composite Gauss-Legendre) or integrated
// in u = atan(x) (heavy tails).
struct Chart {
  enum class Kind { Finite, Truncated, Tan } kind = Kind::Finite;
  double lo = 0.0, hi = 0.0;  // truncation bounds for Kind::Truncated

  std::vector<DeNode> nodes(double a, double b, double h) const {
    switch (kind) {
      case Kind::Finite: return tanh_sinh_nodes(a, b, h);
      case Kind::Truncated: {
        a = std::max(a, lo);
        b = std::min(b, hi);
        if (!(a < b)) return {};
        const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / (6.0 * h))));
        const QuadratureRule r = composite_gauss_legendre(panels, 6, a, b);
        std::vector<DeNode> out(r.nodes.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = {r.nodes[i], r.weights[i]};
        return out;
      }
      case Kind::Tan: {
        std::vector<DeNode> out = tanh_sinh_nodes(std::atan(a), std::atan(b), h);
        for (auto& n : out) {
          const double c = std::cos(n.x);
          n = {std::tan(n.x), n.w / (c * c)};
        }
        return out;
      }
    }
    return {};
  }
};

// Light tail: the site weight falls below -50 within |x| < 1e3.
Chart choose_chart(double lo, double hi, const RealFn& site) {
  Chart c;
  if (std::isfinite(lo) && std::isfinite(hi)) return c;
  c.kind = Chart::Kind::Tan;
  if (!site) return c;
  auto cut = [&](double dir) {
    for (double x = 1.0; x < 1e3; x *= 1.1)
      if (!(site(dir * x) > -50.0)) return dir * x;
    return dir * kInf;
  };
  c.lo = std::isfinite(lo) ? lo : cut(-1.0);
  c.hi = std::isfinite(hi) ? hi : cut(1.0);
  if (std::isfinite(c.lo) && std::isfinite(c.hi)) c.kind = Chart::Kind::Truncated;
  return c;
}

void visit_level(int level, const OrderedRegion& region, const std::vector<Chart>& charts, double prev, double h,
                 std::vector<double>& x, double weight, const OrderedVisitor& visit, const RealFn& site) {
  const double a = level == 0 ? region.lo[0] : std::max(prev, region.lo[level]);
  const double b = region.hi[level];
  if (!(a < b)) return;
  const int n = region.dim();
  for (const DeNode& node : charts[level].nodes(a, b, h)) {
    if (!(node.x > a && node.x < b) || !std::isfinite(node.w)) continue;
    if (site && !(site(node.x) > -700.0)) continue;
    x[level] = node.x;
    const double w = weight * node.w;
    if (level + 1 == n)
      visit(std::span<const double>(x.data(), x.size()), w);
    else
      visit_level(level + 1, region, charts, node.x, h, x, w, visit, site);
  }
}

}  // namespace

OrderedRegion OrderedRegion::simplex(int n, double lo, double hi) {
  return {std::vector<double>(n, lo), std::vector<double>(n, hi)};
}

void visit_ordered_nodes(const OrderedRegion& region, double h, const OrderedVisitor& visit,
                         const RealFn& site_log_weight) {
  if (region.lo.size() != region.hi.size()) throw Error(ErrorCode::BadParameter, "region bounds differ in length");
  for (int k = 0; k < region.dim(); ++k)
    if (!(region.lo[k] < region.hi[k])) throw Error(ErrorCode::InvalidInterval, "ordered region needs lo < hi");
  if (region.dim() == 0) {
    visit(std::span<const double>(), 1.0);
    return;
  }
  std::vector<Chart> charts;
  for (int k = 0; k < region.dim(); ++k) charts.push_back(choose_chart(region.lo[k], region.hi[k], site_log_weight));
  std::vector<double> x(region.dim());
  visit_level(0, region, charts, 0.0, h, x, 1.0, visit, site_log_weight);
}

double integrate_ordered(const std::function<double(std::span<const double>)>& log_f, const OrderedRegion& region,
                         double rel_tol, const RealFn& site_log_weight) {
  auto at_step = [&](double h) {
    double sum = 0.0;
    visit_ordered_nodes(
        region, h,
        [&](std::span<const double> x, double w) {
          const double lf = log_f(x);
          if (lf > -kInf) sum += w * std::exp(lf);
        },
        site_log_weight);
    return sum;
  };
  const double steps[] = {1.0 / 2, 1.0 / 3, 1.0 / 4, 1.0 / 6, 1.0 / 8, 1.0 / 12, 1.0 / 16, 1.0 / 24};
  double prev = at_step(steps[0]);
  for (std::size_t i = 1; i < std::size(steps); ++i) {
    const double cur = at_step(steps[i]);
    if (std::abs(cur - prev) <= rel_tol * std::abs(cur)) return cur;
    prev = cur;
  }
  std::ostringstream os;
  os << "ordered integral did not settle (dim " << region.dim() << ", last " << prev << ")";
  throw Error(ErrorCode::NonConvergence, os.str());
}

}  // namespace rmtdec
