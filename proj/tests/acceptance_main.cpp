// Runs the acceptance criteria and prints one line per criterion.
// Usage: acceptance [--details] [--report-dir DIR] [--workers N] [AC-k ...]
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "levycop/acceptance.hpp"

int main(int argc, char** argv) {
  levycop::AcceptanceOptions opts;
  bool details = false;
  std::vector<std::string> ids;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--details") {
      details = true;
    } else if (arg == "--report-dir" && i + 1 < argc) {
      opts.report_dir = argv[++i];
    } else if (arg == "--workers" && i + 1 < argc) {
      opts.workers = std::atoi(argv[++i]);
    } else {
      ids.push_back(arg);
    }
  }
  if (ids.empty()) ids = levycop::acceptance_ids();
  int failures = 0;
  for (const auto& id : ids) {
    const auto outcome = levycop::run_acceptance(id, opts);
    std::printf("%s\n", levycop::format_outcome(outcome).c_str());
    if (details)
      for (const auto& line : outcome.details) std::printf("    %s\n", line.c_str());
    std::fflush(stdout);
    failures += !outcome.passed;
  }
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
