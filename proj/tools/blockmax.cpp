#include <iostream>
#include <string>
#include <vector>

#include "blockmax/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return blockmax::cli::run(args, std::cout, std::cerr);
}
