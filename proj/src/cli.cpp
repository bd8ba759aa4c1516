#include "rmtdec/cli.hpp"

#include "rmtdec/error.hpp"
#include "rmtdec/gap.hpp"
#include "rmtdec/verify.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

namespace rmtdec {

namespace {

constexpr int kOk = 0, kFail = 1, kConfig = 2, kRuntime = 3;

struct RunConfig {
  std::string kind = "oe";
  std::string family = "gauss";
  std::optional<double> a;
  int n = 2;
  int m = 1;
  int mu = 0;
  std::size_t count = 1000;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";
  std::string method = "auto";
  int workers = 0;
  std::vector<double> interval;
  std::vector<double> s;
  std::vector<double> theta;
  std::vector<int> k;
  std::string mode = "gaudin";
  bool quick = false;
  std::string json_path;
  std::string identity = "all";
};

// Raised for problems with the flags themselves (exit 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

AdmissibleWeight weight_of(const RunConfig& c, int n_for_default) {
  Family f;
  try {
    f = parse_family(c.family);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  try {
    if (c.a) return AdmissibleWeight::make(f, *c.a);
    if (f == Family::Cauchy) return cauchy_a0(n_for_default);
    return AdmissibleWeight::make(f, 0.0);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

SampleMethod method_of(const std::string& m) {
  if (m == "auto") return SampleMethod::Auto;
  if (m == "exact") return SampleMethod::Exact;
  if (m == "mcmc") return SampleMethod::Mcmc;
  throw ConfigError("unknown method '" + m + "'");
}

EnsembleSpec spec_of(const RunConfig& c) {
  EnsembleSpec spec;
  try {
    spec.kind = parse_kind(c.kind);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  spec.n = c.n;
  spec.mu = c.mu;
  spec.method = method_of(c.method);
  const bool circular = spec.kind == EnsembleKind::COE || spec.kind == EnsembleKind::CUE ||
                        spec.kind == EnsembleKind::Oplus || spec.kind == EnsembleKind::Ominus;
  if (!circular) spec.weight = weight_of(c, c.n);
  try {
    spec.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return spec;
}

SampleOptions sampling_of(const RunConfig& c) {
  SampleOptions o;
  o.method = method_of(c.method);
  o.workers = c.workers;
  return o;
}

std::ostream* open_output(const std::string& path, std::ofstream& file, std::ostream& fallback) {
  if (path.empty() || path == "-") return &fallback;
  file.open(path);
  if (!file) throw Error(ErrorCode::BadParameter, "cannot open '" + path + "' for writing");
  return &file;
}

int cmd_sample(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const EnsembleSpec spec = spec_of(c);
  if (c.format != "csv" && c.format != "json") throw ConfigError("format must be csv or json");
  const SampleBatch b = sample_ensemble(spec, c.count, c.seed, sampling_of(c));
  std::ofstream file;
  std::ostream* os = open_output(c.out, file, out);
  if (c.format == "csv")
    write_csv(*os, b, spec.label());
  else
    write_jsonl(*os, b, spec.label());
  std::ostream& diag = c.out.empty() || c.out == "-" ? err : out;
  diag << "sampled " << b.size() << " x " << b.width << " " << spec.label() << " method=" << b.diagnostics.method;
  if (b.diagnostics.method == "mcmc")
    diag << " acceptance=" << b.diagnostics.acceptance << " ess=" << b.diagnostics.ess
         << " chains=" << b.diagnostics.chains;
  diag << "\n";
  return kOk;
}

nlohmann::ordered_json poly_json(const GapPolynomial& g, Interval J) {
  nlohmann::ordered_json j;
  j["engine"] = "exact";
  j["interval"] = {J.lo, J.hi};
  j["E"] = g.coeffs;
  j["total"] = g.total();
  return j;
}

int cmd_gap(const RunConfig& c, std::ostream& out) {
  const EnsembleSpec spec = spec_of(c);
  auto need_s = [&]() -> double {
    if (c.s.size() != 1) throw ConfigError("this engine needs a single --s");
    return c.s.front();
  };
  auto need_theta = [&]() -> double {
    if (c.theta.size() != 1) throw ConfigError("this engine needs a single --theta");
    return c.theta.front();
  };
  auto symmetric = [&]() -> Interval {
    if (c.interval.size() == 2) return {c.interval[0], c.interval[1]};
    const double s = need_s();
    return {-s, s};
  };
  const GapMode mode = c.mode == "direct" ? GapMode::Direct : GapMode::Gaudin;
  if (c.mode != "direct" && c.mode != "gaudin") throw ConfigError("mode must be direct or gaudin");

  nlohmann::ordered_json j;
  j["spec"] = spec.label();
  auto mc = [&](Interval J) {
    const GapEstimate est = gap_mc(spec, J, spec.width(), c.count, c.seed, sampling_of(c));
    nlohmann::ordered_json r;
    r["engine"] = "monte_carlo";
    r["interval"] = {J.lo, J.hi};
    r["count"] = est.count;
    r["seed"] = c.seed;
    r["E"] = est.e;
    std::vector<double> se;
    for (int k = 0; k < static_cast<int>(est.e.size()); ++k) se.push_back(est.stderr_of(k));
    r["stderr"] = se;
    return r;
  };
  nlohmann::ordered_json body;
  switch (spec.kind) {
    case EnsembleKind::UE: {
      const Interval J = symmetric();
      body = poly_json(gap_ue_exact(*spec.weight, spec.n, J), J);
      break;
    }
    case EnsembleKind::chUE: {
      const double s = need_s();
      body = poly_json(gap_chue_exact(*spec.weight, spec.mu, spec.n, s), {0.0, s});
      break;
    }
    case EnsembleKind::OE: {
      const Interval J = symmetric();
      const bool sym = std::abs(J.lo + J.hi) < 1e-15;
      if (spec.n % 2 == 1 && sym)
        body = poly_json(gap_oe_odd_exact(*spec.weight, spec.n, J.hi, mode), J);
      else
        body = mc(J);
      break;
    }
    case EnsembleKind::CUE: {
      const double t = need_theta();
      body = poly_json(gap_cue_exact(spec.n, t), {-t, t});
      break;
    }
    case EnsembleKind::Oplus:
    case EnsembleKind::Ominus: {
      // Exact engine is keyed by the determinant sector through the Cauchy image.
      const int sign = cauchy_chue_group(0, spec.n) == spec.kind ? 1 : -1;
      const double t = need_theta();
      body = poly_json(gap_orthogonal_exact(sign, spec.n, t), {0.0, t});
      break;
    }
    case EnsembleKind::COE: {
      const double t = need_theta();
      body = mc({-t, t});
      break;
    }
  }
  for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
  std::ofstream file;
  std::ostream* os = open_output(c.out, file, out);
  *os << j.dump(2) << "\n";
  return kOk;
}

std::vector<VerificationReport> configured_reports(const RunConfig& c, bool count_set, const CLI::App& app) {
  const bool single = app.count("--family") > 0 || app.count("--n") > 0 || app.count("--a") > 0 ||
                      app.count("--m") > 0;
  SuiteOptions suite;
  suite.quick = c.quick;
  suite.seed = c.seed;
  suite.count = count_set ? c.count : 0;
  suite.sampling = sampling_of(c);
  if (c.identity == "all") return run_all(suite);
  const auto& names = identity_names();
  if (std::find(names.begin(), names.end(), c.identity) == names.end())
    throw ConfigError("unknown identity '" + c.identity + "'");
  if (!single) return run_identity(c.identity, suite);

  VerifyOptions vo;
  vo.count = count_set ? c.count : (c.quick ? 20000 : 100000);
  vo.seed = c.seed;
  vo.sampling = suite.sampling;
  McOptions mc;
  mc.count = vo.count;
  mc.seed = vo.seed;
  mc.sampling = vo.sampling;
  const std::vector<int> ks = c.k.empty() ? std::vector<int>{0, 1} : c.k;
  const std::string& id = c.identity;
  const AdmissibleWeight w = weight_of(c, id == "cor1" ? c.n + 1 : c.n);
  if (id == "recurrence") return {verify_recurrence(w, 8, 100, c.seed)};
  if (id == "thm1") return {verify_thm1(w, c.n, vo)};
  if (id == "cor1") return {verify_cor1(w, c.n, vo)};
  if (id == "ue_split") return {verify_ue_split(w, c.n, vo)};
  if (id == "q_odd") return {verify_q_odd(w, c.n, vo)};
  if (id == "thmCE") return {verify_thmCE(c.n, vo)};
  if (id == "dixon_anderson") return {verify_dixon_anderson(w, c.m, c.mu, 5, c.seed)};
  if (id == "thm_gap") {
    ThmGapOptions to;
    to.count = vo.count;
    to.seed = vo.seed;
    to.sampling = vo.sampling;
    return {check_thm_gap(w, c.n, ks, c.s.empty() ? std::vector<double>{0.5, 1.0} : c.s, to)};
  }
  if (id == "b1") {
    std::vector<VerificationReport> r;
    for (double s : c.s.empty() ? std::vector<double>{1.0} : c.s)
      r.push_back(check_B1_structure(w, c.n, s, chebyshev_nodes(2 * c.n + 3, 0.0, 2.0)));
    return r;
  }
  const std::vector<double> thetas = c.theta.empty() ? std::vector<double>{std::numbers::pi / 2} : c.theta;
  if (id == "eq831p") return {check_8_31p(c.n, ks, thetas, mc)};
  if (id == "thmD4") return {check_thm_D4(c.n, ks, thetas, mc)};
  // Weight pairs are fixed by the tables; only n and s are taken from the flags.
  const std::vector<double> ss = c.s.empty() ? std::vector<double>{0.5, 2.0} : c.s;
  if (id == "eq24") return {check_identity_24(pair_laguerre_even(), c.n, ks, ss, mc)};
  return {check_identity_24cp(pair_laguerre_odd(1.0), c.n, ks, ss, true, mc)};
}

int cmd_verify(const RunConfig& c, bool count_set, const CLI::App& app, std::ostream& out) {
  const auto reports = configured_reports(c, count_set, app);
  bool all = true;
  for (const auto& r : reports) {
    print_table(out, r);
    all = all && r.pass();
  }
  out << (all ? "ALL PASS" : "SOME CHECKS FAILED") << " (" << reports.size() << " reports)\n";
  if (!c.json_path.empty()) {
    std::ofstream f(c.json_path);
    if (!f) throw Error(ErrorCode::BadParameter, "cannot open '" + c.json_path + "'");
    f << to_json(reports) << "\n";
  }
  return all ? kOk : kFail;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decimation and superposition identities for random matrix ensembles"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "File of 'key = value' defaults; flags override");
  RunConfig c;

  app.add_option("--kind", c.kind, "oe, ue, chue, coe, cue, oplus, ominus")->capture_default_str();
  app.add_option("--family", c.family, "gauss, jacobi or cauchy")->capture_default_str();
  app.add_option("--a", c.a, "Weight parameter; Cauchy defaults to a = (n-1)/2");
  app.add_option("--n", c.n, "Order")->capture_default_str();
  app.add_option("--m", c.m, "Number of even points (dixon_anderson)")->capture_default_str();
  app.add_option("--mu", c.mu, "Chiral parameter, 0 or 1")->capture_default_str();
  auto* count_opt = app.add_option("--count", c.count, "Number of draws")->capture_default_str();
  app.add_option("--seed", c.seed, "Seed")->capture_default_str();
  app.add_option("--out", c.out, "Output file (default stdout)");
  app.add_option("--format", c.format, "csv or json")->capture_default_str();
  app.add_option("--method", c.method, "auto, exact or mcmc")->capture_default_str();
  app.add_option("--workers", c.workers, "Worker threads; 0 reads RMTDEC_WORKERS, else all cores");
  app.add_option("--interval", c.interval, "Interval endpoints lo hi")->expected(2);
  app.add_option("--s", c.s, "Half-width s (one or more)")->expected(1, 64);
  app.add_option("--theta", c.theta, "Angle theta (one or more)")->expected(1, 64);
  app.add_option("--k", c.k, "Gap orders k")->expected(1, 64);
  app.add_option("--mode", c.mode, "direct or gaudin")->capture_default_str();
  app.add_flag("--quick", c.quick, "Reduced sizes for verify");
  app.add_option("--json", c.json_path, "Write verification reports as JSON");

  auto* sample = app.add_subcommand("sample", "Draw spectra and write CSV or JSON lines");
  auto* gap = app.add_subcommand("gap", "Gap probabilities E(k; J)");
  auto* verify = app.add_subcommand("verify", "Run identity checks");
  verify->add_option("identity", c.identity, "Identity name or 'all'")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (c.count == 0) throw ConfigError("count must be positive");
    if (*sample) return cmd_sample(c, out, err);
    if (*gap) return cmd_gap(c, out);
    if (*verify) return cmd_verify(c, count_opt->count() > 0, app, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::BadParameter ? kConfig : kRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kConfig;
}

}  // namespace rmtdec
