#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <qpc/parallel.hpp>

namespace qpc::verify {

// One failed (or notable) trial; `detail` says which assertion broke and by
// how much.
struct CheckOutcome {
  int trial = 0;
  bool passed = true;
  std::string detail;
};

struct SuiteResult {
  int criterion = 0;
  std::string name;
  int checks = 0;    // individual assertions evaluated
  int failures = 0;  // assertions that failed
  std::vector<CheckOutcome> failed;  // failing trials, ordered by trial index
  double elapsed_ms = 0.0;

  bool passed() const { return failures == 0; }
};

struct VerifyOptions {
  std::uint64_t seed = 7;
  int trials = 0;            // 0 → the per-suite defaults from the acceptance contract
  std::vector<int> suites;   // criterion numbers to run; empty → all twelve
  par::Mode mode = par::execution_mode();
};

// Runs the requested suites. Trials are sharded across workers with per-trial
// seeds derived as seed ⊕ trial-index; reported outcomes are ordered by trial
// index. Progress and failure details go to `log` (human-readable).
std::vector<SuiteResult> run_verification(const VerifyOptions& opts, std::ostream& log);

int suite_count();
const char* suite_name(int criterion);

}  // namespace qpc::verify
