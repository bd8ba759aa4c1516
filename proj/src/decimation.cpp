#include "rmtdec/decimation.hpp"

#include <algorithm>
#include <cmath>

namespace rmtdec {

std::vector<double> singular_values(std::span<const double> spectrum) {
  std::vector<double> out(spectrum.size());
  std::transform(spectrum.begin(), spectrum.end(), out.begin(), [](double x) { return std::abs(x); });
  std::sort(out.begin(), out.end());
  return out;
}

DecimationResult decimate(std::span<const double> sv) {
  std::vector<double> sorted(sv.begin(), sv.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  DecimationResult r;
  r.mu = static_cast<int>(n % 2);
  // Rank from the top: index n-1 is the largest (odd location).
  for (std::size_t i = 0; i < n; ++i) ((n - 1 - i) % 2 == 1 ? r.even : r.odd).push_back(sorted[i]);
  return r;
}

std::vector<double> superpose(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace rmtdec
