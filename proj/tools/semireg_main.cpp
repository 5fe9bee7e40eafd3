#include <iostream>

#include "semireg/cli.hpp"

int main(int argc, char** argv) {
  return semireg::cli_main(argc, argv, std::cout, std::cerr);
}
