#include <iostream>

#include "recurdim/cli.hpp"

int main(int argc, char** argv) {
  return recurdim::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
