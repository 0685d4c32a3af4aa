#include <iostream>
#include <string>
#include <vector>

#include "erblock/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return erblock::cli::run(args, std::cout, std::cerr);
}
