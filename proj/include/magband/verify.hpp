#pragma once

#include <string>
#include <vector>

// Self-checking suites: each registered claim about the spectra is evaluated
// numerically, with an explicit margin and an error estimate, and graded
// pass / fail / inconclusive.  A claim passes only when its margin exceeds
// three times the numerical error estimate.

namespace magband {
namespace verify {

enum class Verdict { Pass, Fail, Inconclusive };

std::string to_string(Verdict v);

struct CheckRecord {
  std::string id;       // stable anchor, e.g. "window.bounds"
  std::string claim;    // human-readable statement of the property
  std::string config;   // geometry / field / resolution stamp
  double margin = 0.0;  // slack by which the claim holds (negative: violated)
  double error_estimate = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  std::string detail;   // measured numbers or the caught exception
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckRecord> checks;

  bool all_passed() const;
};

/// Available suite names; "all" runs every suite.
std::vector<std::string> suite_names();

/// Claim anchors a suite covers (static; independent of execution).
std::vector<std::string> coverage(const std::string& suite);

/// Run every check of the suite; individual failures are captured in the
/// records, never thrown.  Throws std::invalid_argument for an unknown name.
SuiteReport run_suite(const std::string& suite, int threads = 1);

}  // namespace verify
}  // namespace magband
