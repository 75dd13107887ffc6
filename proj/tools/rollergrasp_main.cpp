#include <iostream>

#include "rollergrasp/cli.hpp"

int main(int argc, char** argv) {
  return rollergrasp::cli_main(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
