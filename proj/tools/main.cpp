#include <iostream>
#include <string>
#include <vector>

#include "tensecon/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tensecon::run_command(args, std::cout, std::cerr);
}
