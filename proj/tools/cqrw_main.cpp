#include <iostream>

#include "cqrw/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cqrw::run_cli(args, std::cout, std::cerr);
}
