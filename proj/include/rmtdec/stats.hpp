#pragma once

// Two-sample tests and the Bonferroni battery used to compare spectra.

#include "rmtdec/numerics.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rmtdec {

struct SampleBatch;

struct TestResult {
  std::string name;
  double statistic = 0.0;
  double p = 1.0;
};

/// Limiting Kolmogorov survival function Q(lambda) = 2 sum (-1)^(k-1) e^(-2 k^2 lambda^2).
double kolmogorov_sf(double lambda);

/// Upper tail of chi-square with dof degrees of freedom.
double chi2_sf(double x, double dof);

/// Classical two-sample KS with the asymptotic p-value
/// Q((sqrt(ne) + 0.12 + 0.11/sqrt(ne)) D), ne = n m / (n + m). Throws EmptySample.
TestResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// One-sample KS against a continuous CDF.
TestResult ks_one_sample(std::span<const double> a, const RealFn& cdf);

/// Chi-square test of homogeneity on a contingency table (rows = samples,
/// columns = categories). Columns with expected count below 5 are merged
/// into their neighbour. Fewer than two usable columns gives p = 1.
TestResult chi2_homogeneity(const std::vector<std::vector<double>>& table);

/// Chi-square goodness of fit of counts against cell probabilities; cells with
/// expected count below 5 are merged with the next one.
TestResult chi2_goodness_of_fit(std::span<const double> counts, std::span<const double> probs);

/// A family of tests judged at family-wise level alpha with Bonferroni.
struct Battery {
  std::vector<TestResult> tests;
  double alpha = 1e-3;

  double threshold() const { return tests.empty() ? alpha : alpha / static_cast<double>(tests.size()); }
  double min_p() const;
  bool pass() const { return min_p() > threshold(); }
  void append(const Battery& other);
};

/// KS on every order statistic, KS on one uniformly chosen point per draw, and
/// for each of 8 pooled-quantile bins a chi-square test on the per-draw counts.
/// Both batches must have the same width. `seed` drives the point choice.
Battery compare_spectra(const SampleBatch& a, const SampleBatch& b, std::uint64_t seed, const std::string& tag = {});

/// Same battery on row-major spectra of the given width.
Battery compare_spectra(std::span<const double> a, std::span<const double> b, int width, std::uint64_t seed,
                        const std::string& tag = {});

}  // namespace rmtdec
