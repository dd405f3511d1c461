#include <iostream>

#include "vpnn/cli.hpp"

int main(int argc, char** argv) {
  return vpnn::run_cli(argc, argv, std::cout, std::cerr);
}
