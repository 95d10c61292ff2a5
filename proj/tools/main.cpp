#include <cstdio>
#include <string>
#include <vector>

#include "duval/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  auto res = duval::cli::run(args);
  std::fputs(res.out.c_str(), stdout);
  return res.exit_code;
}
