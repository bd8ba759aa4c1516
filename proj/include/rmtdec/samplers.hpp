#pragma once

// Spectra of every ensemble: Gaussian and Haar matrix models, the Cauchy
// pullbacks of circular ensembles, and a Metropolis sampler for the rest.

#include "rmtdec/densities.hpp"
#include "rmtdec/weights.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rmtdec {

enum class EnsembleKind { OE, UE, chUE, COE, CUE, Oplus, Ominus };
enum class SampleMethod { Auto, Exact, Mcmc };

std::string_view to_string(EnsembleKind kind);
/// Accepts oe, ue, chue, coe, cue, oplus, ominus (case-insensitive).
EnsembleKind parse_kind(std::string_view name);

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::OE;
  /// Number of points for OE/UE/chUE/COE/CUE. For O+- it is the paper's n:
  /// the group is O(n+1), with ceil(n/2) (O+) or floor(n/2) (O-) angles.
  int n = 1;
  /// OE uses w1, UE uses w2, chUE uses x^(2 mu) w2. Circular kinds ignore it.
  std::optional<AdmissibleWeight> weight;
  int mu = 0;
  /// Replaces the admissible weight for OE/UE/chUE (MCMC only).
  std::optional<LogWeight> custom;
  SampleMethod method = SampleMethod::Auto;

  /// Points per draw.
  int width() const;
  std::string label() const;
  /// Throws BadParameter on inconsistent fields.
  void validate() const;
};

struct SampleDiagnostics {
  std::string method;       // "gaussian", "haar", "stereographic", "mcmc"
  double acceptance = 1.0;  // mean over chains (MCMC only)
  double ess = 0.0;         // effective sample size of the first coordinate sum (MCMC only)
  double step_scale = 0.0;  // final adapted proposal scale (MCMC only)
  int chains = 0;
};

/// Draws stored row-major, each row sorted ascending.
struct SampleBatch {
  int width = 0;
  std::vector<double> values;
  std::uint64_t seed = 0;
  SampleDiagnostics diagnostics;

  std::size_t size() const { return width == 0 ? draws_ : values.size() / static_cast<std::size_t>(width); }
  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * static_cast<std::size_t>(width), static_cast<std::size_t>(width)};
  }
  /// Column k over all draws (k-th smallest value).
  std::vector<double> column(int k) const;
  void set_empty_rows(std::size_t count) { draws_ = count; }

 private:
  std::size_t draws_ = 0;  // draw count when width == 0
};

struct McmcParams {
  int burn_in = 10000;    // sweeps
  int thin = 0;           // sweeps between draws; 0 means 10 n
  double initial_scale = 0.5;
  /// Share of moves made as a walk in theta = 2 atan(x); < 0 means 1 for heavy tails, else 0.
  double heavy_fraction = -1.0;
};

struct SampleOptions {
  SampleMethod method = SampleMethod::Auto;
  McmcParams mcmc;
  /// Worker threads; 0 reads RMTDEC_WORKERS, then the hardware count.
  int workers = 0;
};

int resolve_workers(int requested);

/// Independent particles with single-site weight and pair interaction
/// |x_i - x_j|^beta, or |x_i^2 - x_j^2|^beta when squared.
struct ParticleDensity {
  LogWeight site;
  int n = 1;
  double beta = 1.0;
  bool squared = false;
  bool heavy_tails = false;

  double log_density(std::span<const double> x) const;
};

/// GOE (beta=1, density prod e^{-x^2/2}|Delta|) or GUE (beta=2, prod e^{-x^2}|Delta|^2).
SampleBatch sample_gaussian_matrix(int beta, int n, std::size_t count, std::uint64_t seed, int workers = 0);

/// CUE/COE: n angles in (-pi, pi]. O+/O-: Haar orthogonal of size n+1 with
/// determinant +-1, angles in (0, pi) with the algebraic 0 and pi removed.
SampleBatch sample_haar_circular(EnsembleKind kind, int n, std::size_t count, std::uint64_t seed, int workers = 0);

/// Random-walk Metropolis on the structured density. Throws StuckChain if the
/// acceptance rate after burn-in is below 1%.
SampleBatch sample_mcmc(const ParticleDensity& density, std::size_t count, std::uint64_t seed,
                        const McmcParams& params = {}, int workers = 0);

/// Same, for an arbitrary log-density on R^n (full re-evaluation per move).
/// `start` must have finite log-density.
SampleBatch sample_mcmc(const std::function<double(std::span<const double>)>& log_density,
                        std::span<const double> start, std::size_t count, std::uint64_t seed,
                        const McmcParams& params = {}, bool heavy_tails = false, int workers = 0);

/// theta = 2 atan(x); x = tan(theta / 2). The inverse throws PoleAtPi for |theta| >= pi.
double stereographic(double x);
double inverse_stereographic(double theta);

/// The determinant sector of O(N+1) whose angles, mapped by x = tan(theta/2),
/// give chUE with weight x^(2 mu) (1+x^2)^(-N). For odd N this is O+ when mu = 0
/// and O- when mu = 1; for even N the two are exchanged.
EnsembleKind cauchy_chue_group(int mu, int big_n);

/// True when sample_ensemble has a matrix-model route for spec.
bool has_exact_sampler(const EnsembleSpec& spec);

/// The density sampled by the MCMC route.
ParticleDensity particle_density(const EnsembleSpec& spec);

SampleBatch sample_ensemble(const EnsembleSpec& spec, std::size_t count, std::uint64_t seed,
                            const SampleOptions& options = {});

/// CSV: "# spec=... seed=... diagnostics=..." then one comma-separated row per draw, 17 significant digits.
void write_csv(std::ostream& os, const SampleBatch& batch, const std::string& spec_label);
/// JSON lines: one header object, then one {"values": [...]} object per draw.
void write_jsonl(std::ostream& os, const SampleBatch& batch, const std::string& spec_label);

}  // namespace rmtdec
