#pragma once

#include <string>
#include <vector>

namespace qpc::cli {

struct RunOutput {
  int exit_code = 0;
  std::string out;  // the ResultDocument (JSON, one line)
  std::string err;  // human-readable log lines
};

// In-process command runner used by tests and the verify engine.
// `args` excludes the program name. Exit codes: 0 success, 1 failed
// verification, 2 validation/usage error, 3 numerical failure.
RunOutput run(const std::vector<std::string>& args);

// Process entry point; forwards argv and prints the captured streams.
int main_entry(int argc, char** argv);

}  // namespace qpc::cli
