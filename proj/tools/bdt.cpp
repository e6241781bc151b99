#include <iostream>
#include <string>
#include <vector>

#include "bdt/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return bdt::Run(args, std::cout, std::cerr);
}
