#pragma once

// Acceptance checks C1..C9 grouped into the suites "types", "radon" and
// "solver". Each check prints one line and carries its numbers as JSON.

#include <string>
#include <vector>

#include "ridgetv/io.hpp"

namespace ridgetv::verify {

struct Check {
  std::string id;    // "C1".."C9"
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  io::json metrics = io::json::object();
};

struct SuiteResult {
  std::string suite;
  std::vector<Check> checks;
  bool passed() const;
};

/// "types", "radon", "solver".
const std::vector<std::string>& suite_names();
/// Check ids in a suite; "all" lists every id. ValidationError for an unknown suite.
std::vector<std::string> suite_checks(const std::string& suite);

/// Runs one check. Exceptions are caught and reported as a failure with the
/// message under metrics["error"].
Check run_check(const std::string& id);
SuiteResult run_suite(const std::string& suite);

/// {"suite", "passed", "checks": [{"id", "name", "passed", "seconds", "metrics"}]}
io::json to_json(const SuiteResult& r);
/// "PASS C1 radon oracle ... (0.4 s)"
std::string format_line(const Check& c);

}  // namespace ridgetv::verify
