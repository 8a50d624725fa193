#include <iostream>

#include "lotto/cli.hpp"

int main(int argc, char** argv) {
  return lotto::cli::run(argc, argv, std::cout, std::cerr);
}
