#include <iostream>
#include <string>
#include <vector>

#include "cfsim/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cfsim::cli::main(args, std::cout, std::cerr);
}
