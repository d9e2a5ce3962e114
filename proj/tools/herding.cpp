#include <iostream>
#include <string>
#include <vector>

#include "herding/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return herding::run_cli(args, std::cout, std::cerr);
}
