#include "rmtdec/stats.hpp"

#include "rmtdec/error.hpp"
#include "rmtdec/samplers.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace rmtdec {

double kolmogorov_sf(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  const double pi = std::numbers::pi;
  if (lambda < 1.18) {
    // Theta-function form converges fast for small lambda.
    double sum = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double j = 2.0 * k - 1.0;
      sum += std::exp(-j * j * pi * pi / (8.0 * lambda * lambda));
    }
    return std::clamp(1.0 - std::sqrt(2.0 * pi) / lambda * sum, 0.0, 1.0);
  }
  double sum = 0.0, sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-300) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double chi2_sf(double x, double dof) {
  if (!(dof > 0.0)) throw Error(ErrorCode::BadParameter, "chi-square needs dof > 0");
  if (!(x > 0.0)) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * x);
}

TestResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::EmptySample, "KS needs two nonempty samples");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size()), m = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(i / n - j / m));
  }
  const double ne = std::sqrt(n * m / (n + m));
  return {"ks", d, kolmogorov_sf((ne + 0.12 + 0.11 / ne) * d)};
}

TestResult ks_one_sample(std::span<const double> a, const RealFn& cdf) {
  if (a.empty()) throw Error(ErrorCode::EmptySample, "KS needs a nonempty sample");
  std::vector<double> x(a.begin(), a.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, f - i / n, (i + 1) / n - f});
  }
  const double ne = std::sqrt(n);
  return {"ks1", d, kolmogorov_sf((ne + 0.12 + 0.11 / ne) * d)};
}

TestResult chi2_homogeneity(const std::vector<std::vector<double>>& table) {
  if (table.size() < 2) throw Error(ErrorCode::BadParameter, "homogeneity test needs two rows");
  const std::size_t cols = table[0].size();
  for (const auto& r : table)
    if (r.size() != cols) throw Error(ErrorCode::BadParameter, "ragged contingency table");
  std::vector<double> row_tot(table.size(), 0.0);
  double total = 0.0;
  for (std::size_t r = 0; r < table.size(); ++r)
    for (double v : table[r]) row_tot[r] += v;
  for (double t : row_tot) total += t;
  if (!(total > 0.0)) throw Error(ErrorCode::EmptySample, "empty contingency table");
  const double min_row = *std::min_element(row_tot.begin(), row_tot.end());
  if (!(min_row > 0.0)) throw Error(ErrorCode::EmptySample, "empty row in contingency table");

  // Merge columns left to right until each group's smallest expected count is >= 5.
  std::vector<std::vector<double>> merged;
  std::vector<double> acc(table.size(), 0.0);
  double acc_tot = 0.0;
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < table.size(); ++r) {
      acc[r] += table[r][c];
      acc_tot += table[r][c];
    }
    if (acc_tot * min_row / total >= 5.0) {
      merged.push_back(acc);
      std::fill(acc.begin(), acc.end(), 0.0);
      acc_tot = 0.0;
    }
  }
  if (acc_tot > 0.0) {
    if (merged.empty()) {
      merged.push_back(acc);
    } else {
      for (std::size_t r = 0; r < table.size(); ++r) merged.back()[r] += acc[r];
    }
  }
  if (merged.size() < 2) return {"chi2", 0.0, 1.0};
  double stat = 0.0;
  for (const auto& col : merged) {
    double ct = 0.0;
    for (double v : col) ct += v;
    for (std::size_t r = 0; r < table.size(); ++r) {
      const double e = row_tot[r] * ct / total;
      stat += (col[r] - e) * (col[r] - e) / e;
    }
  }
  const double dof = static_cast<double>((merged.size() - 1) * (table.size() - 1));
  return {"chi2", stat, chi2_sf(stat, dof)};
}

TestResult chi2_goodness_of_fit(std::span<const double> counts, std::span<const double> probs) {
  if (counts.size() != probs.size()) throw Error(ErrorCode::BadParameter, "counts and probabilities differ in length");
  double n = 0.0;
  for (double c : counts) n += c;
  if (!(n > 0.0)) throw Error(ErrorCode::EmptySample, "no counts");
  std::vector<std::pair<double, double>> cells;  // (observed, expected)
  double o = 0.0, e = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    o += counts[i];
    e += n * probs[i];
    if (e >= 5.0) {
      cells.push_back({o, e});
      o = e = 0.0;
    }
  }
  if (e > 0.0 || o > 0.0) {
    if (cells.empty())
      cells.push_back({o, e});
    else {
      cells.back().first += o;
      cells.back().second += e;
    }
  }
  if (cells.size() < 2) return {"chi2gof", 0.0, 1.0};
  double stat = 0.0;
  for (const auto& [obs, exp] : cells) stat += (obs - exp) * (obs - exp) / exp;
  return {"chi2gof", stat, chi2_sf(stat, static_cast<double>(cells.size() - 1))};
}

double Battery::min_p() const {
  double p = 1.0;
  for (const auto& t : tests) p = std::min(p, t.p);
  return p;
}

void Battery::append(const Battery& other) { tests.insert(tests.end(), other.tests.begin(), other.tests.end()); }

Battery compare_spectra(std::span<const double> a, std::span<const double> b, int width, std::uint64_t seed,
                        const std::string& tag) {
  Battery bat;
  if (width <= 0) return bat;
  const std::size_t na = a.size() / width, nb = b.size() / width;
  if (na == 0 || nb == 0) throw Error(ErrorCode::EmptySample, "battery needs draws on both sides");
  const std::string prefix = tag.empty() ? "" : tag + ":";

  std::vector<double> ca(na), cb(nb);
  for (int k = 0; k < width; ++k) {
    for (std::size_t i = 0; i < na; ++i) ca[i] = a[i * width + k];
    for (std::size_t i = 0; i < nb; ++i) cb[i] = b[i * width + k];
    TestResult t = ks_two_sample(ca, cb);
    t.name = prefix + "ks_order_" + std::to_string(k + 1);
    bat.tests.push_back(t);
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, width - 1);
  for (std::size_t i = 0; i < na; ++i) ca[i] = a[i * width + pick(rng)];
  for (std::size_t i = 0; i < nb; ++i) cb[i] = b[i * width + pick(rng)];
  TestResult pt = ks_two_sample(ca, cb);
  pt.name = prefix + "ks_random_point";
  bat.tests.push_back(pt);

  // Counting statistics in pooled-quantile bins.
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::sort(pooled.begin(), pooled.end());
  constexpr int kBins = 8;
  std::vector<double> edges;
  for (int q = 1; q < kBins; ++q) edges.push_back(pooled[pooled.size() * q / kBins]);
  auto bin_of = [&](double v) { return static_cast<int>(std::upper_bound(edges.begin(), edges.end(), v) - edges.begin()); };
  for (int bin = 0; bin < kBins; ++bin) {
    std::vector<std::vector<double>> table(2, std::vector<double>(width + 1, 0.0));
    auto tally = [&](std::span<const double> s, std::size_t draws, std::vector<double>& row) {
      for (std::size_t i = 0; i < draws; ++i) {
        int c = 0;
        for (int k = 0; k < width; ++k) c += bin_of(s[i * width + k]) == bin;
        row[c] += 1.0;
      }
    };
    tally(a, na, table[0]);
    tally(b, nb, table[1]);
    TestResult t = chi2_homogeneity(table);
    t.name = prefix + "count_bin_" + std::to_string(bin + 1);
    bat.tests.push_back(t);
  }
  return bat;
}

Battery compare_spectra(const SampleBatch& a, const SampleBatch& b, std::uint64_t seed, const std::string& tag) {
  if (a.width != b.width) throw Error(ErrorCode::BadParameter, "batches differ in width");
  return compare_spectra(a.values, b.values, a.width, seed, tag);
}

}  // namespace rmtdec
