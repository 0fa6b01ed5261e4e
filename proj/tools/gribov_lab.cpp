#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "gribov/cli/run.hpp"

int main(int argc, char** argv) {
  std::optional<std::string> env;
  if (const char* v = std::getenv(gribov::cli::kConfigEnv)) env = v;
  return gribov::cli::main_entry(argc, argv, std::cout, std::cerr, env);
}
