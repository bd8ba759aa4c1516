#pragma once

// Verification suite: distributional identities via KS / chi-square batteries,
// closed-form and quadrature identities via residuals.

#include "rmtdec/gap.hpp"
#include "rmtdec/report.hpp"
#include "rmtdec/samplers.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rmtdec {

struct VerifyOptions {
  std::size_t count = 100000;
  std::uint64_t seed = 1;
  SampleOptions sampling;
};

/// Cauchy weight whose OE_n is the stereographic image of COE_n, a = (n - 1)/2.
AdmissibleWeight cauchy_a0(int n);

/// Recurrence residual at `points` random points for every legal order k <= max_order,
/// and theta against 1/2 the integral of w1.
VerificationReport verify_recurrence(const AdmissibleWeight& w, int max_order = 8, int points = 100,
                                     std::uint64_t seed = 1);

/// Sum over the 2^n eigenvalue sign patterns against log_q_xy: the offset must be constant.
VerificationReport verify_factorization(const AdmissibleWeight& w, int n, int configs = 10000, std::uint64_t seed = 1);

/// even|OE_n(w1)| against chUE_m(x^(2 mu) w2).
VerificationReport verify_thm1(const AdmissibleWeight& w, int n, const VerifyOptions& options = {});

/// |UE_n(w2)| against even|OE_n(w1)| u even|OE_{n+1}(w1)|, independent batches.
VerificationReport verify_cor1(const AdmissibleWeight& w, int n, const VerifyOptions& options = {});

/// |UE_n(w2)| against chUE_{ceil(n/2)}(w2) u chUE_{floor(n/2)}(x^2 w2).
VerificationReport verify_ue_split(const AdmissibleWeight& w, int n, const VerifyOptions& options = {});

/// Folded COE_n angles: even part against O^nu(n+1), odd part against O^-nu(n+1), and
/// |CUE_n| against O^+(n+1) u O^-(n+1). nu = + for even n. The labels follow the
/// Cauchy-image convention of gap_orthogonal_exact.
VerificationReport verify_thmCE(int n, const VerifyOptions& options = {});

/// Interlacing integral of g_{1-mu} against theta^mu A_{mhat,1-mu} g~_mu at `configs` random s.
VerificationReport verify_dixon_anderson(const AdmissibleWeight& w, int m, int mu, int configs = 5,
                                         std::uint64_t seed = 1);

/// Odd-decimated singular values of OE_n(w1) against exp(log_q_odd), n in {2, 3}.
/// Chi-square on 16 bins (one point) or an 8 x 8 grid (two points), edges from a pilot sample.
VerificationReport verify_q_odd(const AdmissibleWeight& w, int n, const VerifyOptions& options = {});

struct CalibrationResult {
  int repetitions = 0;
  int passes = 0;
  double rate() const { return repetitions == 0 ? 0.0 : static_cast<double>(passes) / repetitions; }
};

/// Null runs of the spectrum battery: GOE_3 against itself with fresh seeds.
CalibrationResult calibrate(int repetitions = 50, std::size_t count = 10000, std::uint64_t seed = 1,
                            const SampleOptions& sampling = {});

/// Identity names accepted by run_identity, in suite order.
const std::vector<std::string>& identity_names();

struct SuiteOptions {
  bool quick = false;
  std::uint64_t seed = 1;
  std::size_t count = 0;  // 0: 1e5, or 2e4 when quick
  SampleOptions sampling;
};

/// The default parameter sweep for one identity.
std::vector<VerificationReport> run_identity(const std::string& name, const SuiteOptions& options);
std::vector<VerificationReport> run_all(const SuiteOptions& options);

}  // namespace rmtdec
