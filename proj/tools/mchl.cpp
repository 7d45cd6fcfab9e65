#include <iostream>
#include <string>
#include <vector>

#include "mchl/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return mchl::runCli(args, std::cout, std::cerr);
}
