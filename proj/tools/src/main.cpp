#include <iostream>

#include "max2csp/cli.hpp"

int main(int argc, char** argv) {
  return max2csp::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
