#pragma once

// Verification reports shared by the gap checkers and the verify suite.

#include "rmtdec/stats.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace rmtdec {

enum class CheckKind { PValue, Residual, ZScore };

struct Check {
  std::string name;
  CheckKind kind = CheckKind::Residual;
  double lhs = 0.0;
  double rhs = 0.0;
  /// p-value, |lhs - rhs|, or |z|.
  double value = 0.0;
  /// For residuals and z-scores the bound; p-values are judged against the report threshold.
  double tolerance = 0.0;
  double statistic = 0.0;  // KS D or chi-square value for p-value checks
};

struct VerificationReport {
  std::string identity;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<Check> checks;
  double alpha = 1e-3;
  std::vector<std::string> notes;

  void param(const std::string& key, const std::string& value);
  void param(const std::string& key, double value);
  void param(const std::string& key, long long value);
  void param(const std::string& key, int value) { param(key, static_cast<long long>(value)); }

  void add_p(const std::string& name, double statistic, double p);
  void add_battery(const Battery& battery, const std::string& prefix = {});
  void add_residual(const std::string& name, double lhs, double rhs, double tolerance);
  /// Relative residual |lhs - rhs| / max(|rhs|, tiny).
  void add_relative(const std::string& name, double lhs, double rhs, double tolerance);
  /// z = (lhs - rhs) / stderr, passing when |z| < zmax.
  void add_z(const std::string& name, double lhs, double rhs, double stderr_, double zmax = 3.0);
  void merge(const VerificationReport& other, const std::string& prefix = {});

  /// Bonferroni threshold alpha / (number of p-value checks).
  double p_threshold() const;
  bool passed(const Check& c) const;
  bool pass() const;
  std::size_t failures() const;
};

std::string to_string(CheckKind kind);

/// {identity, parameters, checks: [{name, kind, lhs, rhs, value, tolerance, pass}], pass}.
std::string to_json(const VerificationReport& report, int indent = 2);
std::string to_json(const std::vector<VerificationReport>& reports, int indent = 2);
/// Fixed-width table, one line per check, then a PASS/FAIL line.
void print_table(std::ostream& os, const VerificationReport& report);

}  // namespace rmtdec
