// Acceptance gate: runs every verification suite at its full trial count and
// prints one line per criterion. Exit status 0 only when all of them pass.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <qpc/verify.hpp>

int main(int argc, char** argv) {
  qpc::verify::VerifyOptions opts;  // seed 7, full per-suite trial counts
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--seed" && i + 1 < argc) {
      opts.seed = std::strtoull(argv[++i], nullptr, 10);
    } else if (arg == "--suite" && i + 1 < argc) {
      opts.suites.push_back(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--seed N] [--suite K]...\n";
      return 2;
    }
  }

  std::vector<qpc::verify::SuiteResult> results;
  try {
    results = qpc::verify::run_verification(opts, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  bool all_passed = true;
  for (const auto& r : results) {
    const bool ok = r.passed();
    all_passed = all_passed && ok;
    std::cout << "criterion " << r.criterion << " [" << r.name
              << "]: " << (ok ? "PASS" : "FAIL") << " (" << r.checks
              << " checks, " << r.failures << " failures)" << std::endl;
  }
  std::cout << "ACCEPTANCE: " << (all_passed ? "PASS" : "FAIL") << std::endl;
  return all_passed ? 0 : 1;
}
