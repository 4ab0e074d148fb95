#include <iostream>
#include <string>
#include <vector>

#include "rsc/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return rsc::cli::main_entry(args, std::cout, std::cerr);
}
