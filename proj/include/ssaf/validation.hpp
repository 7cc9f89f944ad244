#pragma once

#include <algorithm>
#include <ostream>
#include <string>
#include <vector>

namespace ssaf {

enum class Severity { Error, Warning };

struct Finding {
  Severity severity;
  std::string element_id;
  std::string message;

  bool operator==(const Finding&) const = default;
};

inline std::ostream& operator<<(std::ostream& os, const Finding& f) {
  return os << (f.severity == Severity::Error ? "error" : "warning") << " ["
            << f.element_id << "] " << f.message;
}

struct ValidationReport {
  std::vector<Finding> findings;

  bool empty() const { return findings.empty(); }

  bool has_errors() const {
    return std::any_of(findings.begin(), findings.end(), [](const Finding& f) {
      return f.severity == Severity::Error;
    });
  }

  std::size_t count(Severity s) const {
    return std::count_if(findings.begin(), findings.end(),
                         [s](const Finding& f) { return f.severity == s; });
  }

  void error(std::string id, std::string msg) {
    findings.push_back({Severity::Error, std::move(id), std::move(msg)});
  }
  void warning(std::string id, std::string msg) {
    findings.push_back({Severity::Warning, std::move(id), std::move(msg)});
  }

  void append(const ValidationReport& other) {
    findings.insert(findings.end(), other.findings.begin(),
                    other.findings.end());
  }

  // One-line summary of the error findings, naming each offending id.
  std::string error_summary() const {
    std::string out;
    for (const Finding& f : findings) {
      if (f.severity != Severity::Error) continue;
      if (!out.empty()) out += "; ";
      out += f.element_id + ": " + f.message;
    }
    return out;
  }
};

}  // namespace ssaf
