#include <iostream>

#include "wcs/cli.hpp"

int main(int argc, char** argv) {
  return wcs::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
