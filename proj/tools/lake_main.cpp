#include <iostream>
#include <string>
#include <vector>

#include "lake/cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return lake::cli::run(args, std::cout, std::cerr, lake::cli::process_environment());
}
