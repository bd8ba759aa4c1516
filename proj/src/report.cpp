#include "rmtdec/report.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace rmtdec {

namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

nlohmann::ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

nlohmann::ordered_json report_json(const VerificationReport& r) {
  nlohmann::ordered_json j;
  j["identity"] = r.identity;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.parameters) params[k] = v;
  j["parameters"] = params;
  j["alpha"] = r.alpha;
  j["p_threshold"] = r.p_threshold();
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) {
    nlohmann::ordered_json cj;
    cj["name"] = c.name;
    cj["kind"] = to_string(c.kind);
    if (c.kind == CheckKind::PValue) {
      cj["statistic"] = number(c.statistic);
      cj["p"] = number(c.value);
      cj["tolerance"] = r.p_threshold();
    } else {
      cj["lhs"] = number(c.lhs);
      cj["rhs"] = number(c.rhs);
      cj[c.kind == CheckKind::ZScore ? "z" : "residual"] = number(c.value);
      cj["tolerance"] = c.tolerance;
    }
    cj["pass"] = r.passed(c);
    checks.push_back(cj);
  }
  j["checks"] = checks;
  if (!r.notes.empty()) j["notes"] = r.notes;
  j["pass"] = r.pass();
  return j;
}

}  // namespace

void VerificationReport::param(const std::string& key, const std::string& value) { parameters.emplace_back(key, value); }
void VerificationReport::param(const std::string& key, double value) { parameters.emplace_back(key, format_double(value)); }
void VerificationReport::param(const std::string& key, long long value) {
  parameters.emplace_back(key, std::to_string(value));
}

void VerificationReport::add_p(const std::string& name, double statistic, double p) {
  Check c;
  c.name = name;
  c.kind = CheckKind::PValue;
  c.value = p;
  c.statistic = statistic;
  checks.push_back(c);
}

void VerificationReport::add_battery(const Battery& battery, const std::string& prefix) {
  for (const auto& t : battery.tests) add_p(prefix.empty() ? t.name : prefix + ":" + t.name, t.statistic, t.p);
}

void VerificationReport::add_residual(const std::string& name, double lhs, double rhs, double tolerance) {
  Check c;
  c.name = name;
  c.kind = CheckKind::Residual;
  c.lhs = lhs;
  c.rhs = rhs;
  c.value = std::abs(lhs - rhs);
  c.tolerance = tolerance;
  checks.push_back(c);
}

void VerificationReport::add_relative(const std::string& name, double lhs, double rhs, double tolerance) {
  Check c;
  c.name = name;
  c.kind = CheckKind::Residual;
  c.lhs = lhs;
  c.rhs = rhs;
  c.value = std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
  c.tolerance = tolerance;
  checks.push_back(c);
}

void VerificationReport::add_z(const std::string& name, double lhs, double rhs, double stderr_, double zmax) {
  Check c;
  c.name = name;
  c.kind = CheckKind::ZScore;
  c.lhs = lhs;
  c.rhs = rhs;
  const double diff = lhs - rhs;
  // A vanishing standard error only passes an exact match.
  c.value = stderr_ > 0.0 ? std::abs(diff) / stderr_ : (std::abs(diff) < 1e-12 ? 0.0 : kInf);
  c.tolerance = zmax;
  checks.push_back(c);
}

void VerificationReport::merge(const VerificationReport& other, const std::string& prefix) {
  for (Check c : other.checks) {
    if (!prefix.empty()) c.name = prefix + ":" + c.name;
    checks.push_back(c);
  }
  notes.insert(notes.end(), other.notes.begin(), other.notes.end());
}

double VerificationReport::p_threshold() const {
  const auto n = std::count_if(checks.begin(), checks.end(), [](const Check& c) { return c.kind == CheckKind::PValue; });
  return n == 0 ? alpha : alpha / static_cast<double>(n);
}

bool VerificationReport::passed(const Check& c) const {
  switch (c.kind) {
    case CheckKind::PValue: return c.value > p_threshold();
    case CheckKind::Residual:
    case CheckKind::ZScore: return c.value < c.tolerance;
  }
  return false;
}

bool VerificationReport::pass() const { return failures() == 0; }

std::size_t VerificationReport::failures() const {
  return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [&](const Check& c) { return !passed(c); }));
}

std::string to_string(CheckKind kind) {
  switch (kind) {
    case CheckKind::PValue: return "p_value";
    case CheckKind::Residual: return "residual";
    case CheckKind::ZScore: return "z";
  }
  return "?";
}

std::string to_json(const VerificationReport& report, int indent) { return report_json(report).dump(indent); }

std::string to_json(const std::vector<VerificationReport>& reports, int indent) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  bool all = true;
  for (const auto& r : reports) {
    arr.push_back(report_json(r));
    all = all && r.pass();
  }
  nlohmann::ordered_json j;
  j["reports"] = arr;
  j["pass"] = all;
  return j.dump(indent);
}

void print_table(std::ostream& os, const VerificationReport& report) {
  os << report.identity;
  for (const auto& [k, v] : report.parameters) os << ' ' << k << '=' << v;
  os << '\n';
  for (const auto& c : report.checks) {
    os << "  " << std::left << std::setw(34) << c.name << std::right << std::setw(9) << to_string(c.kind) << ' ';
    os << std::scientific << std::setprecision(3);
    if (c.kind == CheckKind::PValue)
      os << "p=" << c.value << " (> " << report.p_threshold() << ")";
    else
      os << (c.kind == CheckKind::ZScore ? "|z|=" : "res=") << c.value << " (< " << c.tolerance << ")";
    os << std::defaultfloat << (report.passed(c) ? "  ok" : "  FAIL") << '\n';
  }
  os << (report.pass() ? "PASS " : "FAIL ") << report.identity << '\n';
}

}  // namespace rmtdec
