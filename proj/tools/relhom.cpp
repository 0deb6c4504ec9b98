#include <iostream>

#include "relhom/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return relhom::cli::run(std::move(args), std::cout, std::cerr);
}
