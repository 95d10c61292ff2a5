#pragma once

#include <string>
#include <vector>

namespace duval::cli {

struct RunResult {
  int exit_code;   // 0 ok, 1 domain error, 2 usage/parse error
  std::string out; // JSON document, newline-terminated
};

// Runs one CLI invocation. Deterministic: identical argument vectors produce
// byte-identical output.
RunResult run(const std::vector<std::string>& args);

}  // namespace duval::cli
