#include "rmtdec/verify.hpp"

#include "rmtdec/decimation.hpp"
#include "rmtdec/densities.hpp"
#include "rmtdec/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace rmtdec {

namespace {

std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 step on seed + stream
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

EnsembleSpec make_spec(EnsembleKind kind, int n, const AdmissibleWeight& w, int mu = 0) {
  EnsembleSpec s;
  s.kind = kind;
  s.n = n;
  s.weight = w;
  s.mu = mu;
  return s;
}

// Applies f to each row and concatenates the equal-length results.
template <class F>
std::vector<double> map_rows(const SampleBatch& b, F&& f) {
  std::vector<double> out;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const std::vector<double> r = f(b.row(i));
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

std::vector<double> even_part(std::span<const double> row) { return decimate(singular_values(row)).even; }
std::vector<double> odd_part(std::span<const double> row) { return decimate(singular_values(row)).odd; }
std::vector<double> abs_sorted(std::span<const double> row) { return singular_values(row); }

std::vector<double> superpose_rows(const std::vector<double>& a, int wa, const std::vector<double>& b, int wb,
                                   std::size_t rows) {
  std::vector<double> out;
  out.reserve(rows * (wa + wb));
  for (std::size_t i = 0; i < rows; ++i) {
    const auto s = superpose(std::span<const double>(a.data() + i * wa, wa), std::span<const double>(b.data() + i * wb, wb));
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

void note_diagnostics(VerificationReport& rep, const std::string& side, const SampleBatch& b) {
  std::ostringstream os;
  os << side << ": " << b.diagnostics.method;
  if (b.diagnostics.method == "mcmc")
    os << " acceptance=" << b.diagnostics.acceptance << " ess=" << b.diagnostics.ess;
  rep.notes.push_back(os.str());
}

double log_vandermonde_sq(std::span<const double> x) {
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j)
    for (std::size_t i = 0; i < j; ++i) s += std::log(std::abs(x[j] * x[j] - x[i] * x[i]));
  return s;
}

std::vector<double> quantile_edges(std::vector<double> v, int bins, double lo, double hi) {
  std::sort(v.begin(), v.end());
  std::vector<double> e{lo};
  for (int i = 1; i < bins; ++i) e.push_back(v[static_cast<std::size_t>(static_cast<double>(i) / bins * (v.size() - 1))]);
  e.push_back(hi);
  return e;
}

int bin_of(const std::vector<double>& edges, double x) {
  const auto it = std::upper_bound(edges.begin() + 1, edges.end() - 1, x);
  return static_cast<int>(it - edges.begin()) - 1;
}

}  // namespace

AdmissibleWeight cauchy_a0(int n) { return from_table1(Family::Cauchy, n, 0.0); }

// ---------------------------------------------------------------------------

VerificationReport verify_recurrence(const AdmissibleWeight& w, int max_order, int points, std::uint64_t seed) {
  VerificationReport rep;
  rep.identity = "recurrence";
  rep.param("weight", w.label());
  rep.param("points", points);
  std::mt19937_64 rng(seed);
  const double reach = w.family() == Family::Jacobi ? 0.999 : 6.0;
  std::uniform_real_distribution<double> u(-reach, reach);
  std::vector<double> xs(points);
  for (double& x : xs) x = u(rng);
  for (int k = 1; k <= max_order; ++k) {
    if (!w.order_allowed(k)) continue;
    rep.add_residual("order " + std::to_string(k), check_recurrence(w, k, xs), 0.0, 1e-10);
  }
  IntegrationOptions opts;
  opts.rel_tol = 1e-14;
  const double quad = integrate_adaptive([&](double x) { return w.w1(x); }, 0.0, w.omega(), opts).value;
  rep.add_relative("theta", w.theta(), quad, 1e-10);
  return rep;
}

VerificationReport verify_factorization(const AdmissibleWeight& w, int n, int configs, std::uint64_t seed) {
  if (n < 1 || n > 12) throw Error(ErrorCode::BadParameter, "sign sum needs 1 <= n <= 12");
  VerificationReport rep;
  rep.identity = "factorization";
  rep.param("weight", w.label());
  rep.param("n", n);
  rep.param("configs", configs);
  std::mt19937_64 rng(seed);
  const double reach = w.family() == Family::Jacobi ? 0.98 : 3.0;
  std::uniform_real_distribution<double> u(0.02, reach);
  double lo = kInf, hi = -kInf;
  std::vector<double> sv(n), x(n);
  for (int c = 0; c < configs; ++c) {
    for (double& v : sv) v = u(rng);
    std::sort(sv.begin(), sv.end());
    // Log-sum-exp over sign patterns of log |Delta|.
    std::vector<double> terms;
    terms.reserve(1u << n);
    for (int mask = 0; mask < (1 << n); ++mask) {
      for (int i = 0; i < n; ++i) x[i] = (mask >> i & 1) ? -sv[i] : sv[i];
      double lv = 0.0;
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < k; ++j) lv += std::log(std::abs(x[k] - x[j]));
      terms.push_back(lv);
    }
    const double top = *std::max_element(terms.begin(), terms.end());
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - top);
    double lw = 0.0;
    for (double v : sv) lw += w.log_w1(v);
    const double offset = top + std::log(acc) + lw - log_q_xy(w, sv);
    lo = std::min(lo, offset);
    hi = std::max(hi, offset);
  }
  rep.add_residual("offset spread", hi - lo, 0.0, 1e-9);
  return rep;
}

VerificationReport verify_thm1(const AdmissibleWeight& w, int n, const VerifyOptions& options) {
  if (n < 2) throw Error(ErrorCode::BadParameter, "thm1 needs n >= 2");
  VerificationReport rep;
  rep.identity = "thm1";
  rep.param("weight", w.label());
  rep.param("n", n);
  rep.param("count", static_cast<long long>(options.count));
  rep.param("seed", static_cast<long long>(options.seed));
  const int m = n / 2, mu = n % 2;
  const SampleBatch lhs = sample_ensemble(make_spec(EnsembleKind::OE, n, w), options.count, mix(options.seed, 1),
                                          options.sampling);
  const SampleBatch rhs = sample_ensemble(make_spec(EnsembleKind::chUE, m, w, mu), options.count,
                                          mix(options.seed, 2), options.sampling);
  note_diagnostics(rep, "oe", lhs);
  note_diagnostics(rep, "chue", rhs);
  rep.add_battery(compare_spectra(map_rows(lhs, even_part), rhs.values, m, mix(options.seed, 3)));
  return rep;
}

VerificationReport verify_cor1(const AdmissibleWeight& w, int n, const VerifyOptions& options) {
  if (n < 1) throw Error(ErrorCode::BadParameter, "cor1 needs n >= 1");
  VerificationReport rep;
  rep.identity = "cor1";
  rep.param("weight", w.label());
  rep.param("n", n);
  rep.param("count", static_cast<long long>(options.count));
  rep.param("seed", static_cast<long long>(options.seed));
  const SampleBatch ue = sample_ensemble(make_spec(EnsembleKind::UE, n, w), options.count, mix(options.seed, 1),
                                         options.sampling);
  const SampleBatch a = sample_ensemble(make_spec(EnsembleKind::OE, n, w), options.count, mix(options.seed, 2),
                                        options.sampling);
  const SampleBatch b = sample_ensemble(make_spec(EnsembleKind::OE, n + 1, w), options.count, mix(options.seed, 3),
                                        options.sampling);
  note_diagnostics(rep, "ue", ue);
  note_diagnostics(rep, "oe_n", a);
  note_diagnostics(rep, "oe_n+1", b);
  const auto ea = map_rows(a, even_part), eb = map_rows(b, even_part);
  const auto rhs = superpose_rows(ea, n / 2, eb, (n + 1) / 2, options.count);
  rep.add_battery(compare_spectra(map_rows(ue, abs_sorted), rhs, n, mix(options.seed, 4)));
  return rep;
}

VerificationReport verify_ue_split(const AdmissibleWeight& w, int n, const VerifyOptions& options) {
  if (n < 1) throw Error(ErrorCode::BadParameter, "ue_split needs n >= 1");
  VerificationReport rep;
  rep.identity = "ue_split";
  rep.param("weight", w.label());
  rep.param("n", n);
  rep.param("count", static_cast<long long>(options.count));
  rep.param("seed", static_cast<long long>(options.seed));
  const int mhat = (n + 1) / 2, m = n / 2;
  const SampleBatch ue = sample_ensemble(make_spec(EnsembleKind::UE, n, w), options.count, mix(options.seed, 1),
                                         options.sampling);
  const SampleBatch c0 = sample_ensemble(make_spec(EnsembleKind::chUE, mhat, w, 0), options.count,
                                         mix(options.seed, 2), options.sampling);
  note_diagnostics(rep, "ue", ue);
  note_diagnostics(rep, "chue0", c0);
  std::vector<double> rhs = c0.values;
  if (m > 0) {
    const SampleBatch c1 = sample_ensemble(make_spec(EnsembleKind::chUE, m, w, 1), options.count,
                                           mix(options.seed, 3), options.sampling);
    note_diagnostics(rep, "chue1", c1);
    rhs = superpose_rows(c0.values, mhat, c1.values, m, options.count);
  }
  rep.add_battery(compare_spectra(map_rows(ue, abs_sorted), rhs, n, mix(options.seed, 4)));
  return rep;
}

VerificationReport verify_thmCE(int n, const VerifyOptions& options) {
  if (n < 2) throw Error(ErrorCode::BadParameter, "thmCE needs n >= 2");
  VerificationReport rep;
  rep.identity = "thmCE";
  rep.param("n", n);
  rep.param("count", static_cast<long long>(options.count));
  rep.param("seed", static_cast<long long>(options.seed));
  const int mu = n % 2;
  const int nu = mu == 0 ? 1 : -1;
  auto group = [n](int sign) { return cauchy_chue_group(sign > 0 ? 0 : 1, n); };
  const int workers = options.sampling.workers;
  const SampleBatch coe = sample_haar_circular(EnsembleKind::COE, n, options.count, mix(options.seed, 1), workers);
  const SampleBatch same = sample_haar_circular(group(nu), n, options.count, mix(options.seed, 2), workers);
  const SampleBatch other = sample_haar_circular(group(-nu), n, options.count, mix(options.seed, 3), workers);
  rep.notes.push_back(std::string("even part against ") + std::string(to_string(group(nu))) + "(" +
                      std::to_string(n + 1) + "), odd part against " + std::string(to_string(group(-nu))) + "(" +
                      std::to_string(n + 1) + ")");
  rep.add_battery(compare_spectra(map_rows(coe, even_part), same.values, same.width, mix(options.seed, 4)), "even");
  rep.add_battery(compare_spectra(map_rows(coe, odd_part), other.values, other.width, mix(options.seed, 5)), "odd");

  const SampleBatch cue = sample_haar_circular(EnsembleKind::CUE, n, options.count, mix(options.seed, 6), workers);
  const SampleBatch op = sample_haar_circular(EnsembleKind::Oplus, n, options.count, mix(options.seed, 7), workers);
  const SampleBatch om = sample_haar_circular(EnsembleKind::Ominus, n, options.count, mix(options.seed, 8), workers);
  const auto rhs = superpose_rows(op.values, op.width, om.values, om.width, options.count);
  rep.add_battery(compare_spectra(map_rows(cue, abs_sorted), rhs, n, mix(options.seed, 9)), "union");
  return rep;
}

VerificationReport verify_dixon_anderson(const AdmissibleWeight& w, int m, int mu, int configs, std::uint64_t seed) {
  if (m < 1 || m > 2 || (mu != 0 && mu != 1)) throw Error(ErrorCode::BadParameter, "need m in {1, 2} and mu in {0, 1}");
  const int n = 2 * m + mu, mhat = m + mu;
  if (w.family() == Family::Cauchy && n > w.kappa_bound() + 2.0)
    throw Error(ErrorCode::OrderExceeded, "Cauchy weight needs n <= kappa + 2");
  VerificationReport rep;
  rep.identity = "dixon_anderson";
  rep.param("weight", w.label());
  rep.param("m", m);
  rep.param("mu", mu);
  const double tol = w.family() == Family::Cauchy ? 1e-5 : 1e-7;
  const double reach = w.family() == Family::Jacobi ? 0.95 : 2.5;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.05, reach);
  const double coef = std::pow(w.theta(), mu) * w.big_A(mhat, 1 - mu);
  auto log_g = [&](std::span<const double> t) {
    double s = log_vandermonde_sq(t);
    for (double v : t) s += (mu == 0 ? std::log(v) : 0.0) + w.log_w1(v);
    return s;
  };
  for (int c = 0; c < configs; ++c) {
    std::vector<double> s(m);  // descending
    for (double& v : s) v = u(rng);
    std::sort(s.begin(), s.end(), std::greater<>());
    std::vector<double> upper{w.omega()}, lower;
    for (int j = 0; j < mhat; ++j) {
      if (j > 0) upper.push_back(s[j - 1]);
      lower.push_back(j < m ? s[j] : 0.0);
    }
    OrderedRegion region;
    for (int j = mhat - 1; j >= 0; --j) {
      region.lo.push_back(lower[j]);
      region.hi.push_back(upper[j]);
    }
    const double lhs = integrate_ordered(log_g, region, 1e-10, [&](double x) { return w.log_w1(x); });
    std::vector<double> asc(s.rbegin(), s.rend());
    double log_rhs = log_vandermonde_sq(asc);
    for (double v : asc) log_rhs += (mu == 1 ? std::log(v) : 0.0) + std::log(w.companion(v));
    std::ostringstream name;
    name << "s=(";
    for (int j = 0; j < m; ++j) name << (j ? "," : "") << s[j];
    name << ")";
    rep.add_relative(name.str(), lhs, coef * std::exp(log_rhs), tol);
  }
  return rep;
}

VerificationReport verify_q_odd(const AdmissibleWeight& w, int n, const VerifyOptions& options) {
  if (n != 2 && n != 3) throw Error(ErrorCode::BadParameter, "q_odd check covers n = 2 and n = 3");
  VerificationReport rep;
  rep.identity = "q_odd";
  rep.param("weight", w.label());
  rep.param("n", n);
  rep.param("count", static_cast<long long>(options.count));
  rep.param("seed", static_cast<long long>(options.seed));
  const int mhat = (n + 1) / 2;
  const EnsembleSpec spec = make_spec(EnsembleKind::OE, n, w);
  const SampleBatch main = sample_ensemble(spec, options.count, mix(options.seed, 1), options.sampling);
  const SampleBatch pilot = sample_ensemble(spec, std::min<std::size_t>(options.count, 20000), mix(options.seed, 2),
                                            options.sampling);
  const auto odd_main = map_rows(main, odd_part), odd_pilot = map_rows(pilot, odd_part);
  auto log_q = [&](std::span<const double> t) { return log_q_odd(w, t, n); };
  const RealFn site = [&](double x) { return w.log_w1(x); };
  const double om = w.omega();
  std::vector<double> counts, probs;
  if (mhat == 1) {
    const auto edges = quantile_edges(odd_pilot, 16, 0.0, om);
    counts.assign(16, 0.0);
    for (double t : odd_main) counts[bin_of(edges, t)] += 1.0;
    for (int i = 0; i < 16; ++i) probs.push_back(integrate_ordered(log_q, {{edges[i]}, {edges[i + 1]}}, 1e-9, site));
  } else {
    std::vector<double> p1, p2;
    for (std::size_t i = 0; i < odd_pilot.size(); i += 2) {
      p1.push_back(odd_pilot[i]);
      p2.push_back(odd_pilot[i + 1]);
    }
    const auto e1 = quantile_edges(p1, 8, 0.0, om), e2 = quantile_edges(p2, 8, 0.0, om);
    counts.assign(64, 0.0);
    for (std::size_t i = 0; i < odd_main.size(); i += 2)
      counts[bin_of(e1, odd_main[i]) * 8 + bin_of(e2, odd_main[i + 1])] += 1.0;
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) {
        // Split where x1 crosses the lower x2 edge so each piece is smooth.
        const double lo1 = e1[i], hi1 = std::min(e1[i + 1], e2[j + 1]), c = e2[j];
        double p = 0.0;
        if (lo1 < std::min(hi1, c))
          p += integrate_ordered(log_q, {{lo1, c}, {std::min(hi1, c), e2[j + 1]}}, 1e-9, site);
        if (std::max(lo1, c) < hi1)
          p += integrate_ordered(log_q, {{std::max(lo1, c), std::max(lo1, c)}, {hi1, e2[j + 1]}}, 1e-9, site);
        probs.push_back(p);
      }
  }
  double total = 0.0;
  for (double p : probs) total += p;
  for (double& p : probs) p /= total;
  const TestResult t = chi2_goodness_of_fit(counts, probs);
  rep.add_p(mhat == 1 ? "chi2 16 bins" : "chi2 8x8 bins", t.statistic, t.p);
  return rep;
}

CalibrationResult calibrate(int repetitions, std::size_t count, std::uint64_t seed, const SampleOptions& sampling) {
  CalibrationResult r;
  r.repetitions = repetitions;
  const EnsembleSpec spec = make_spec(EnsembleKind::OE, 3, AdmissibleWeight::gauss());
  for (int i = 0; i < repetitions; ++i) {
    const std::uint64_t base = mix(seed, 1000 + i);
    const SampleBatch a = sample_ensemble(spec, count, mix(base, 1), sampling);
    const SampleBatch b = sample_ensemble(spec, count, mix(base, 2), sampling);
    if (compare_spectra(a, b, mix(base, 3)).pass()) ++r.passes;
  }
  return r;
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& identity_names() {
  static const std::vector<std::string> names{"recurrence", "thm1",  "cor1",   "ue_split", "thm_gap",
                                              "b1",         "eq24",  "eq24cp", "eq831p",   "thmCE",
                                              "thmD4",      "dixon_anderson",  "q_odd"};
  return names;
}

namespace {

std::vector<AdmissibleWeight> sampling_families(int n) {
  return {AdmissibleWeight::gauss(), AdmissibleWeight::jacobi(0.5), cauchy_a0(n)};
}

std::vector<double> s_grid(const AdmissibleWeight& w) {
  if (w.family() == Family::Jacobi) return {0.1, 0.3, 0.5, 0.7, 0.9};
  return {0.25, 0.5, 1.0, 1.5, 2.5};
}

}  // namespace

std::vector<VerificationReport> run_identity(const std::string& name, const SuiteOptions& options) {
  const bool quick = options.quick;
  const std::size_t count = options.count > 0 ? options.count : (quick ? 20000 : 100000);
  const auto idx = static_cast<std::uint64_t>(
      std::find(identity_names().begin(), identity_names().end(), name) - identity_names().begin());
  VerifyOptions vo;
  vo.count = count;
  vo.seed = mix(options.seed, idx);
  vo.sampling = options.sampling;
  McOptions mc;
  mc.count = count;
  mc.seed = vo.seed;
  mc.sampling = options.sampling;
  const std::vector<int> small = quick ? std::vector<int>{2} : std::vector<int>{2, 3};
  std::vector<VerificationReport> out;

  if (name == "recurrence") {
    for (const auto& w : {AdmissibleWeight::gauss(), AdmissibleWeight::jacobi(0.0), AdmissibleWeight::jacobi(0.5),
                          AdmissibleWeight::jacobi(2.0), AdmissibleWeight::cauchy(2.0), AdmissibleWeight::cauchy(3.5)})
      out.push_back(verify_recurrence(w, 8, 100, vo.seed));
  } else if (name == "thm1") {
    const std::vector<int> ns = quick ? std::vector<int>{2, 3} : std::vector<int>{2, 3, 4, 5};
    for (int n : ns)
      for (const auto& w : sampling_families(n)) out.push_back(verify_thm1(w, n, vo));
  } else if (name == "cor1") {
    for (int n : small)
      for (const auto& w : {AdmissibleWeight::gauss(), AdmissibleWeight::jacobi(0.5), cauchy_a0(n + 1)})
        out.push_back(verify_cor1(w, n, vo));
  } else if (name == "ue_split") {
    for (int n : small)
      for (const auto& w : sampling_families(n)) out.push_back(verify_ue_split(w, n, vo));
  } else if (name == "thm_gap") {
    for (const auto& w : {AdmissibleWeight::gauss(), AdmissibleWeight::jacobi(0.0)})
      for (int n : {1, 3, 5}) out.push_back(check_thm_gap(w, n, {0, 1}, s_grid(w)));
    ThmGapOptions to;
    to.count = count;
    to.seed = vo.seed;
    to.sampling = options.sampling;
    for (int n : {2, 4}) out.push_back(check_thm_gap(AdmissibleWeight::gauss(), n, {0, 1}, {0.5, 1.0, 2.0}, to));
  } else if (name == "b1") {
    for (int n : {1, 3, 5})
      for (double s : {0.5, 1.0, 2.0})
        out.push_back(check_B1_structure(AdmissibleWeight::gauss(), n, s, chebyshev_nodes(2 * n + 3, 0.0, 2.0)));
    out.push_back(check_derivative_lemma(quick ? 50 : 500, 6, vo.seed));
  } else if (name == "eq24") {
    out.push_back(check_identity_24(pair_laguerre_even(), 2, {0, 1}, {0.5, 2.0}, mc));
    out.push_back(check_identity_24(pair_jacobi_even(1.0), 2, {0, 1}, {0.3, 0.7}, mc));
  } else if (name == "eq24cp") {
    out.push_back(check_identity_24cp(pair_laguerre_odd(1.0), 2, {0, 1}, {0.5, 2.0}, true, mc));
    out.push_back(check_identity_24cp(pair_jacobi_odd(1.0, 1.0), 2, {0, 1}, {-0.3, 0.4}, true, mc));
    if (!quick) out.push_back(check_identity_24cp(pair_gauss_odd(), 2, {0, 1}, {0.0, 0.8}, false, mc));
  } else if (name == "eq831p") {
    for (int n : small)
      out.push_back(check_8_31p(n, {0, 1}, {std::numbers::pi / 4, std::numbers::pi / 2, 3 * std::numbers::pi / 4}, mc));
  } else if (name == "thmCE") {
    for (int n : small) out.push_back(verify_thmCE(n, vo));
  } else if (name == "thmD4") {
    for (int n : small)
      out.push_back(check_thm_D4(n, {0, 1}, {std::numbers::pi / 4, std::numbers::pi / 2, 3 * std::numbers::pi / 4}, mc));
  } else if (name == "dixon_anderson") {
    for (const auto& w : {AdmissibleWeight::gauss(), AdmissibleWeight::jacobi(0.0), AdmissibleWeight::jacobi(0.5),
                          AdmissibleWeight::cauchy(3.5)})
      for (int m : {1, 2})
        for (int mu : {0, 1}) out.push_back(verify_dixon_anderson(w, m, mu, 5, vo.seed));
  } else if (name == "q_odd") {
    for (const auto& w : {AdmissibleWeight::gauss(), AdmissibleWeight::jacobi(0.0)})
      for (int n : {2, 3}) out.push_back(verify_q_odd(w, n, vo));
  } else {
    throw Error(ErrorCode::BadParameter, "unknown identity '" + name + "'");
  }
  return out;
}

std::vector<VerificationReport> run_all(const SuiteOptions& options) {
  std::vector<VerificationReport> out;
  for (const auto& name : identity_names()) {
    auto r = run_identity(name, options);
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

}  // namespace rmtdec
