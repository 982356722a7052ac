#include <iostream>

#include "betageo/cli.hpp"

int main(int argc, char** argv) {
  return betageo::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
