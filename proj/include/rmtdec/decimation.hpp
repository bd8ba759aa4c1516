#pragma once

// Absolute values, even/odd-location decimation and superposition.

#include <span>
#include <vector>

namespace rmtdec {

struct DecimationResult {
  std::vector<double> even;  // s: sigma_{n-1}, sigma_{n-3}, ... (ascending)
  std::vector<double> odd;   // t: the rest, including the largest
  int mu = 0;                // n mod 2
};

/// Sorted |x_i|.
std::vector<double> singular_values(std::span<const double> spectrum);

/// Splits ascending singular values into the even-location set (2nd, 4th, ...
/// largest) and the odd-location set. Unsorted input is sorted first.
DecimationResult decimate(std::span<const double> sv);

/// Multiset union, sorted ascending.
std::vector<double> superpose(std::span<const double> a, std::span<const double> b);

}  // namespace rmtdec
