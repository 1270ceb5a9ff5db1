#include <iostream>
#include <string>
#include <vector>

#include "ksdeg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ksdeg::cli::dispatch(args, std::cout, std::cerr);
}
