// Runs C1..C9 and prints one line per check; exits 1 if any fails.

#include <cstdio>
#include <fstream>

#include "ridgetv/verify.hpp"

int main(int argc, char** argv) {
  using namespace ridgetv;
  const auto result = verify::run_suite("all");
  for (const auto& c : result.checks) std::printf("%s\n", verify::format_line(c).c_str());
  std::printf("%s: %zu checks\n", result.passed() ? "ALL PASS" : "FAILURES", result.checks.size());
  if (argc > 1) {
    std::ofstream out(argv[1]);
    out << io::dump(verify::to_json(result)) << "\n";
  }
  return result.passed() ? 0 : 1;
}
