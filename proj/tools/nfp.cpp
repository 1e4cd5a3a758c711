#include <iostream>
#include <string>
#include <vector>

#include "nfp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return nfp::cli::run(args, std::cout, std::cerr);
}
