#include "rmtdec/samplers.hpp"

#include "rmtdec/error.hpp"

#include "json.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

namespace rmtdec {

namespace {

constexpr std::size_t kExactChunk = 4096;
constexpr std::size_t kMcmcChunk = 16384;

using Rng = std::mt19937_64;

Rng chunk_rng(std::uint64_t seed, std::size_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32), 0x5eedu};
  return Rng(seq);
}

struct ChunkOutput {
  std::vector<double> values;
  double acceptance = 1.0;
  double ess = 0.0;
  double scale = 0.0;
};

// Runs fill(rng, draws, out) for every chunk on a pool of workers. Chunk c
// always gets the stream derived from (seed, c), so the output is independent
// of the worker count.
template <class Fill>
std::vector<ChunkOutput> run_chunks(std::size_t count, std::size_t chunk, std::uint64_t seed, int workers,
                                    Fill&& fill) {
  const std::size_t chunks = count == 0 ? 0 : (count + chunk - 1) / chunk;
  std::vector<ChunkOutput> out(chunks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    while (!failed) {
      const std::size_t c = next++;
      if (c >= chunks) return;
      try {
        Rng rng = chunk_rng(seed, c);
        const std::size_t draws = std::min(chunk, count - c * chunk);
        fill(rng, draws, out[c]);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(resolve_workers(workers), static_cast<int>(chunks)));
  if (n_threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

SampleBatch gather(std::vector<ChunkOutput>&& chunks, int width, std::size_t count, std::uint64_t seed,
                   std::string method) {
  SampleBatch b;
  b.width = width;
  b.seed = seed;
  b.values.reserve(count * static_cast<std::size_t>(width));
  double acc = 0.0, scale = 0.0;
  for (auto& c : chunks) {
    b.values.insert(b.values.end(), c.values.begin(), c.values.end());
    acc += c.acceptance;
    scale += c.scale;
    b.diagnostics.ess += c.ess;
  }
  b.set_empty_rows(count);
  b.diagnostics.method = std::move(method);
  b.diagnostics.chains = static_cast<int>(chunks.size());
  if (!chunks.empty()) {
    b.diagnostics.acceptance = acc / chunks.size();
    b.diagnostics.step_scale = scale / chunks.size();
  }
  return b;
}

// ---------------------------------------------------------------------------
// Matrix models

using CMatrix = Eigen::MatrixXcd;

std::vector<double> goe_draw(Rng& rng, int n) {
  std::normal_distribution<double> z;
  Matrix h(n, n);
  for (int i = 0; i < n; ++i) {
    h(i, i) = z(rng);
    for (int j = 0; j < i; ++j) h(i, j) = h(j, i) = z(rng) * std::sqrt(0.5);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<double> gue_draw(Rng& rng, int n) {
  std::normal_distribution<double> z;
  CMatrix h(n, n);
  for (int i = 0; i < n; ++i) {
    h(i, i) = z(rng) * std::sqrt(0.5);
    for (int j = 0; j < i; ++j) {
      const std::complex<double> c(0.5 * z(rng), 0.5 * z(rng));
      h(i, j) = c;
      h(j, i) = std::conj(c);
    }
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::sort(v.begin(), v.end());
  return v;
}

CMatrix haar_unitary(Rng& rng, int n) {
  std::normal_distribution<double> z;
  CMatrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = {z(rng), z(rng)};
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix& r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const std::complex<double> d = r(j, j);
    q.col(j) *= d / std::abs(d);
  }
  return q;
}

Matrix haar_orthogonal(Rng& rng, int n) {
  std::normal_distribution<double> z;
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = z(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

std::vector<double> unitary_angles(const CMatrix& u) {
  Eigen::ComplexEigenSolver<CMatrix> es(u, false);
  std::vector<double> a;
  for (int i = 0; i < u.rows(); ++i) a.push_back(std::arg(es.eigenvalues()(i)));
  std::sort(a.begin(), a.end());
  return a;
}

// Angles in (0, pi) from the 2x2 rotation blocks of the real Schur form.
std::vector<double> orthogonal_angles(const Matrix& q) {
  Eigen::RealSchur<Matrix> schur(q, false);
  const Matrix& t = schur.matrixT();
  const int n = static_cast<int>(q.rows());
  std::vector<double> a;
  for (int i = 0; i < n;) {
    if (i + 1 < n && t(i + 1, i) != 0.0) {
      const double c = std::clamp(0.5 * (t(i, i) + t(i + 1, i + 1)), -1.0, 1.0);
      const double s = std::sqrt(std::abs(t(i, i + 1) * t(i + 1, i)));
      const double theta = std::atan2(s, c);
      if (theta > 1e-9 && theta < std::numbers::pi - 1e-9) a.push_back(theta);
      i += 2;
    } else {
      ++i;
    }
  }
  std::sort(a.begin(), a.end());
  return a;
}

int expected_angles(EnsembleKind kind, int n) {
  switch (kind) {
    case EnsembleKind::Oplus: return (n + 1) / 2;
    case EnsembleKind::Ominus: return n / 2;
    default: return n;
  }
}

std::vector<double> circular_draw(Rng& rng, EnsembleKind kind, int n) {
  switch (kind) {
    case EnsembleKind::CUE: return unitary_angles(haar_unitary(rng, n));
    case EnsembleKind::COE: {
      const CMatrix u = haar_unitary(rng, n);
      return unitary_angles(u * u.transpose());
    }
    case EnsembleKind::Oplus:
    case EnsembleKind::Ominus: {
      const double want = kind == EnsembleKind::Oplus ? 1.0 : -1.0;
      const int expect = expected_angles(kind, n);
      while (true) {
        Matrix q = haar_orthogonal(rng, n + 1);
        if (q.determinant() * want < 0.0) q.row(0) = -q.row(0);
        auto a = orthogonal_angles(q);
        if (static_cast<int>(a.size()) == expect) return a;
      }
    }
    default: break;
  }
  throw Error(ErrorCode::BadParameter, "not a circular ensemble");
}

// ---------------------------------------------------------------------------
// Metropolis

struct StructuredModel {
  const ParticleDensity& d;
  std::vector<double> x, site;

  StructuredModel(const ParticleDensity& density, std::vector<double> start) : d(density), x(std::move(start)) {
    for (double v : x) site.push_back(d.site.log_w(v));
  }
  double f(double v) const { return d.squared ? v * v : v; }
  bool allowed(double y) const { return d.site.in_support(y); }
  // Returns the log ratio and the new site term through ls.
  double delta(int i, double y, double& ls) const {
    ls = d.site.log_w(y);
    if (!(ls > -kInf)) return -kInf;
    double ratio = 1.0, lr = 0.0;
    const double fy = f(y), fx = f(x[i]);
    for (int j = 0; j < static_cast<int>(x.size()); ++j) {
      if (j == i) continue;
      const double fj = f(x[j]);
      ratio *= std::abs((fy - fj) / (fx - fj));
      if (ratio > 1e200 || ratio < 1e-200) {
        lr += std::log(ratio);
        ratio = 1.0;
      }
    }
    if (ratio == 0.0) return -kInf;
    return ls - site[i] + d.beta * (lr + std::log(ratio));
  }
  void accept(int i, double y, double ls) {
    x[i] = y;
    site[i] = ls;
  }
};

struct GenericModel {
  const std::function<double(std::span<const double>)>& f;
  std::vector<double> x;
  double current;

  GenericModel(const std::function<double(std::span<const double>)>& fn, std::vector<double> start)
      : f(fn), x(std::move(start)), current(fn(x)) {}
  bool allowed(double) const { return true; }
  double delta(int i, double y, double& ls) {
    const double old = x[i];
    x[i] = y;
    ls = f(x);
    x[i] = old;
    if (!(ls > -kInf)) return -kInf;
    return ls - current;
  }
  void accept(int i, double y, double ls) {
    x[i] = y;
    current = ls;
  }
};

template <class Model>
void run_chain(Model& model, Rng& rng, std::size_t draws, const McmcParams& params, bool heavy, ChunkOutput& out) {
  const int n = static_cast<int>(model.x.size());
  const int thin = params.thin > 0 ? params.thin : 10 * n;
  const double heavy_fraction = params.heavy_fraction >= 0.0 ? params.heavy_fraction : (heavy ? 1.0 : 0.0);
  std::normal_distribution<double> z;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double scale = params.initial_scale;
  std::size_t accepted = 0, proposed = 0;

  auto sweep = [&] {
    for (int i = 0; i < n; ++i) {
      const double x = model.x[i];
      double y = 0.0, jac = 0.0;
      if (u(rng) < heavy_fraction) {
        // Random walk in theta = 2 atan(x), with the Jacobian of x = tan(theta / 2).
        const double theta = 2.0 * std::atan(x) + std::min(scale, 2.0) * z(rng);
        ++proposed;
        if (std::abs(theta) >= std::numbers::pi) continue;
        y = std::tan(0.5 * theta);
        jac = std::log1p(y * y) - std::log1p(x * x);
      } else {
        y = x + scale * z(rng);
        ++proposed;
      }
      if (!model.allowed(y)) continue;
      double ls = 0.0;
      const double d = model.delta(i, y, ls) + jac;
      if (d >= 0.0 || std::log(u(rng)) < d) {
        model.accept(i, y, ls);
        ++accepted;
      }
    }
  };

  // Burn-in with scale adaptation toward 25-40% acceptance.
  for (int s = 0; s < params.burn_in; ++s) {
    sweep();
    if ((s + 1) % 50 == 0) {
      const double rate = static_cast<double>(accepted) / static_cast<double>(proposed);
      if (rate > 0.4) scale *= 1.2;
      if (rate < 0.25) scale /= 1.2;
      accepted = proposed = 0;
    }
  }
  accepted = proposed = 0;
  out.values.reserve(draws * n);
  std::vector<double> trace;
  trace.reserve(draws);
  std::vector<double> sorted(n);
  for (std::size_t k = 0; k < draws; ++k) {
    for (int s = 0; s < thin; ++s) sweep();
    sorted = model.x;
    std::sort(sorted.begin(), sorted.end());
    out.values.insert(out.values.end(), sorted.begin(), sorted.end());
    double sum = 0.0;
    for (double v : sorted) sum += v;
    trace.push_back(sum);
  }
  out.acceptance = proposed == 0 ? 1.0 : static_cast<double>(accepted) / static_cast<double>(proposed);
  out.scale = scale;
  if (out.acceptance < 0.01) {
    std::ostringstream os;
    os << "acceptance rate " << out.acceptance << " after burn-in";
    throw Error(ErrorCode::StuckChain, os.str());
  }
  // Lag-1 autocorrelation of the coordinate sum.
  double ess = static_cast<double>(draws);
  if (draws > 2) {
    double mean = 0.0;
    for (double v : trace) mean += v;
    mean /= draws;
    double c0 = 0.0, c1 = 0.0;
    for (std::size_t k = 0; k < draws; ++k) {
      c0 += (trace[k] - mean) * (trace[k] - mean);
      if (k + 1 < draws) c1 += (trace[k] - mean) * (trace[k + 1] - mean);
    }
    if (c0 > 0.0) {
      const double rho = std::clamp(c1 / c0, -0.99, 0.99);
      ess = std::clamp(draws * (1.0 - rho) / (1.0 + rho), 1.0, static_cast<double>(draws));
    }
  }
  out.ess = ess;
}

std::vector<double> default_start(const LogWeight& w, int n) {
  std::vector<double> x(n);
  const bool flo = std::isfinite(w.lo), fhi = std::isfinite(w.hi);
  for (int k = 0; k < n; ++k) {
    const double f = (k + 1.0) / (n + 1.0);
    if (flo && fhi)
      x[k] = w.lo + f * (w.hi - w.lo);
    else if (flo)
      x[k] = w.lo + 0.5 + 0.5 * k;
    else if (fhi)
      x[k] = w.hi - 0.5 - 0.5 * k;
    else
      x[k] = 0.5 * (k - 0.5 * (n - 1));
  }
  return x;
}

bool near(double a, double b) { return std::abs(a - b) < 1e-12; }

// Cauchy chUE with w2 = (1+x^2)^(-N), N = 2a+1 a positive integer.
std::optional<int> cauchy_chue_order(const EnsembleSpec& spec) {
  if (spec.custom || !spec.weight || spec.weight->family() != Family::Cauchy) return std::nullopt;
  const double big_n = 2.0 * spec.weight->a() + 1.0;
  if (!near(big_n, std::round(big_n)) || big_n < 1.0) return std::nullopt;
  const int nn = static_cast<int>(std::round(big_n));
  const int points = spec.mu == 0 ? (nn + 1) / 2 : nn / 2;
  if (points != spec.n) return std::nullopt;
  return nn;
}

}  // namespace

// ---------------------------------------------------------------------------

EnsembleKind cauchy_chue_group(int mu, int big_n) {
  if (big_n < 1 || (mu != 0 && mu != 1)) throw Error(ErrorCode::BadParameter, "need N >= 1 and mu in {0, 1}");
  // SO(2k+1) carries prod (1 - cos theta), SO(2k) none, O-(2k) prod sin^2 theta, O-(2k+1) prod (1 + cos theta).
  const bool odd_size = big_n % 2 == 0;
  if (odd_size) return mu == 1 ? EnsembleKind::Oplus : EnsembleKind::Ominus;
  return mu == 0 ? EnsembleKind::Oplus : EnsembleKind::Ominus;
}

std::string_view to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::OE: return "oe";
    case EnsembleKind::UE: return "ue";
    case EnsembleKind::chUE: return "chue";
    case EnsembleKind::COE: return "coe";
    case EnsembleKind::CUE: return "cue";
    case EnsembleKind::Oplus: return "oplus";
    case EnsembleKind::Ominus: return "ominus";
  }
  return "unknown";
}

EnsembleKind parse_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (auto k : {EnsembleKind::OE, EnsembleKind::UE, EnsembleKind::chUE, EnsembleKind::COE, EnsembleKind::CUE,
                 EnsembleKind::Oplus, EnsembleKind::Ominus})
    if (lower == to_string(k)) return k;
  throw Error(ErrorCode::BadParameter, "unknown ensemble kind '" + lower + "'");
}

int EnsembleSpec::width() const {
  if (kind == EnsembleKind::Oplus || kind == EnsembleKind::Ominus) return expected_angles(kind, n);
  return n;
}

std::string EnsembleSpec::label() const {
  std::ostringstream os;
  os << to_string(kind) << "(n=" << n;
  if (kind == EnsembleKind::chUE) os << ",mu=" << mu;
  if (custom)
    os << "," << custom->label;
  else if (weight && (kind == EnsembleKind::OE || kind == EnsembleKind::UE || kind == EnsembleKind::chUE))
    os << "," << weight->label();
  os << ")";
  return os.str();
}

void EnsembleSpec::validate() const {
  const bool circular = kind == EnsembleKind::COE || kind == EnsembleKind::CUE || kind == EnsembleKind::Oplus ||
                        kind == EnsembleKind::Ominus;
  if (circular ? n < 1 : n < 0) throw Error(ErrorCode::BadParameter, "ensemble order must be positive");
  if (!circular && !weight && !custom) throw Error(ErrorCode::BadParameter, label() + " needs a weight");
  if (kind == EnsembleKind::chUE && mu != 0 && mu != 1) throw Error(ErrorCode::BadParameter, "mu must be 0 or 1");
}

std::vector<double> SampleBatch::column(int k) const {
  if (k < 0 || k >= width) throw Error(ErrorCode::BadParameter, "column index out of range");
  std::vector<double> c(size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = values[i * width + k];
  return c;
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("RMTDEC_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

double ParticleDensity::log_density(std::span<const double> x) const {
  double sum = 0.0;
  for (double v : x) {
    if (!site.in_support(v)) return -kInf;
    sum += site.log_w(v);
  }
  for (std::size_t k = 1; k < x.size(); ++k)
    for (std::size_t j = 0; j < k; ++j) {
      const double d = squared ? x[k] * x[k] - x[j] * x[j] : x[k] - x[j];
      if (d == 0.0) return -kInf;
      sum += beta * std::log(std::abs(d));
    }
  return sum;
}

SampleBatch sample_gaussian_matrix(int beta, int n, std::size_t count, std::uint64_t seed, int workers) {
  if (beta != 1 && beta != 2) throw Error(ErrorCode::BadParameter, "beta must be 1 or 2");
  if (n < 1) throw Error(ErrorCode::BadParameter, "n must be >= 1");
  auto chunks = run_chunks(count, kExactChunk, seed, workers, [&](Rng& rng, std::size_t draws, ChunkOutput& out) {
    out.values.reserve(draws * n);
    for (std::size_t k = 0; k < draws; ++k) {
      const auto v = beta == 1 ? goe_draw(rng, n) : gue_draw(rng, n);
      out.values.insert(out.values.end(), v.begin(), v.end());
    }
  });
  return gather(std::move(chunks), n, count, seed, "gaussian");
}

SampleBatch sample_haar_circular(EnsembleKind kind, int n, std::size_t count, std::uint64_t seed, int workers) {
  if (n < 1) throw Error(ErrorCode::BadParameter, "n must be >= 1");
  const int width = expected_angles(kind, n);
  auto chunks = run_chunks(count, kExactChunk, seed, workers, [&](Rng& rng, std::size_t draws, ChunkOutput& out) {
    out.values.reserve(draws * width);
    for (std::size_t k = 0; k < draws; ++k) {
      const auto v = circular_draw(rng, kind, n);
      out.values.insert(out.values.end(), v.begin(), v.end());
    }
  });
  return gather(std::move(chunks), width, count, seed, "haar");
}

SampleBatch sample_mcmc(const ParticleDensity& density, std::size_t count, std::uint64_t seed,
                        const McmcParams& params, int workers) {
  if (density.n < 1) throw Error(ErrorCode::BadParameter, "n must be >= 1");
  const auto start = default_start(density.site, density.n);
  if (!(density.log_density(start) > -kInf))
    throw Error(ErrorCode::BadParameter, "no finite starting point for " + density.site.label);
  auto chunks = run_chunks(count, kMcmcChunk, seed, workers, [&](Rng& rng, std::size_t draws, ChunkOutput& out) {
    StructuredModel model(density, start);
    run_chain(model, rng, draws, params, density.heavy_tails, out);
  });
  return gather(std::move(chunks), density.n, count, seed, "mcmc");
}

SampleBatch sample_mcmc(const std::function<double(std::span<const double>)>& log_density,
                        std::span<const double> start, std::size_t count, std::uint64_t seed,
                        const McmcParams& params, bool heavy_tails, int workers) {
  std::vector<double> x0(start.begin(), start.end());
  if (x0.empty()) throw Error(ErrorCode::BadParameter, "empty starting point");
  if (!(log_density(x0) > -kInf)) throw Error(ErrorCode::BadParameter, "starting point has zero density");
  auto chunks = run_chunks(count, kMcmcChunk, seed, workers, [&](Rng& rng, std::size_t draws, ChunkOutput& out) {
    GenericModel model(log_density, x0);
    run_chain(model, rng, draws, params, heavy_tails, out);
  });
  return gather(std::move(chunks), static_cast<int>(x0.size()), count, seed, "mcmc");
}

double stereographic(double x) { return 2.0 * std::atan(x); }

double inverse_stereographic(double theta) {
  if (!(std::abs(theta) < std::numbers::pi)) throw Error(ErrorCode::PoleAtPi, "theta = +-pi has no preimage");
  return std::tan(0.5 * theta);
}

bool has_exact_sampler(const EnsembleSpec& spec) {
  switch (spec.kind) {
    case EnsembleKind::COE:
    case EnsembleKind::CUE:
    case EnsembleKind::Oplus:
    case EnsembleKind::Ominus: return true;
    default: break;
  }
  if (spec.custom || !spec.weight) return false;
  const auto& w = *spec.weight;
  switch (spec.kind) {
    case EnsembleKind::OE:
      return w.family() == Family::Gauss || (w.family() == Family::Cauchy && near(w.a(), 0.5 * (spec.n - 1)));
    case EnsembleKind::UE:
      return w.family() == Family::Gauss || (w.family() == Family::Cauchy && near(2.0 * w.a() + 1.0, spec.n));
    case EnsembleKind::chUE: return cauchy_chue_order(spec).has_value();
    default: return false;
  }
}

ParticleDensity particle_density(const EnsembleSpec& spec) {
  spec.validate();
  ParticleDensity d;
  d.n = spec.n;
  const bool heavy = spec.weight && spec.weight->family() == Family::Cauchy;
  switch (spec.kind) {
    case EnsembleKind::OE:
      d.site = spec.custom ? *spec.custom : log_weight_w1(*spec.weight);
      d.beta = 1.0;
      break;
    case EnsembleKind::UE:
      d.site = spec.custom ? *spec.custom : log_weight_w2(*spec.weight);
      d.beta = 2.0;
      break;
    case EnsembleKind::chUE:
      d.site = spec.custom ? *spec.custom : chiral_weight(*spec.weight, spec.mu);
      d.beta = 2.0;
      d.squared = true;
      break;
    default: throw Error(ErrorCode::BadParameter, "circular ensembles have no MCMC route");
  }
  // Algebraic tails: the weight is still above e^-50 at distance 1e3.
  auto slow = [&](double x) { return d.site.in_support(x) && d.site.log_w(x) > -50.0; };
  d.heavy_tails = heavy || slow(1e3) || slow(-1e3);
  return d;
}

SampleBatch sample_ensemble(const EnsembleSpec& spec, std::size_t count, std::uint64_t seed,
                            const SampleOptions& options) {
  spec.validate();
  SampleMethod method = options.method != SampleMethod::Auto ? options.method : spec.method;
  const bool exact = has_exact_sampler(spec);
  if (method == SampleMethod::Exact && !exact)
    throw Error(ErrorCode::BadParameter, "no exact sampler for " + spec.label());
  const bool circular = spec.kind == EnsembleKind::COE || spec.kind == EnsembleKind::CUE ||
                        spec.kind == EnsembleKind::Oplus || spec.kind == EnsembleKind::Ominus;
  if (circular) return sample_haar_circular(spec.kind, spec.n, count, seed, options.workers);
  if (method == SampleMethod::Mcmc || !exact)
    return sample_mcmc(particle_density(spec), count, seed, options.mcmc, options.workers);

  const auto& w = *spec.weight;
  if (w.family() == Family::Gauss)
    return sample_gaussian_matrix(spec.kind == EnsembleKind::OE ? 1 : 2, spec.n, count, seed, options.workers);

  // Cauchy: pull circular angles back with x = tan(theta / 2).
  SampleBatch b;
  if (spec.kind == EnsembleKind::OE) b = sample_haar_circular(EnsembleKind::COE, spec.n, count, seed, options.workers);
  if (spec.kind == EnsembleKind::UE) b = sample_haar_circular(EnsembleKind::CUE, spec.n, count, seed, options.workers);
  if (spec.kind == EnsembleKind::chUE) {
    const int nn = *cauchy_chue_order(spec);
    b = sample_haar_circular(cauchy_chue_group(spec.mu, nn), nn, count, seed, options.workers);
  }
  for (std::size_t i = 0; i < b.size(); ++i) {
    double* row = b.values.data() + i * b.width;
    for (int k = 0; k < b.width; ++k) row[k] = std::tan(0.5 * row[k]);
    std::sort(row, row + b.width);
  }
  b.diagnostics.method = "stereographic";
  return b;
}

// ---------------------------------------------------------------------------

namespace {

std::string diagnostics_text(const SampleDiagnostics& d) {
  std::ostringstream os;
  os << "method:" << d.method;
  if (d.method == "mcmc") os << ";acceptance:" << d.acceptance << ";ess:" << d.ess << ";chains:" << d.chains;
  return os.str();
}

}  // namespace

void write_csv(std::ostream& os, const SampleBatch& batch, const std::string& spec_label) {
  os << "# spec=" << spec_label << " seed=" << batch.seed << " diagnostics=" << diagnostics_text(batch.diagnostics)
     << "\n";
  os << std::setprecision(17);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto r = batch.row(i);
    for (int k = 0; k < batch.width; ++k) os << (k ? "," : "") << r[k];
    os << "\n";
  }
}

void write_jsonl(std::ostream& os, const SampleBatch& batch, const std::string& spec_label) {
  const auto& d = batch.diagnostics;
  nlohmann::json head = {{"spec", spec_label},
                         {"seed", batch.seed},
                         {"diagnostics",
                          {{"method", d.method}, {"acceptance", d.acceptance}, {"ess", d.ess}, {"chains", d.chains}}},
                         {"width", batch.width},
                         {"count", batch.size()}};
  os << head.dump() << "\n";
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto r = batch.row(i);
    os << nlohmann::json{{"values", std::vector<double>(r.begin(), r.end())}}.dump() << "\n";
  }
}

}  // namespace rmtdec
