#include <iostream>

#include "seechart/app/cli.hpp"

int main(int argc, char** argv) {
  return seechart::app::cli_main(argc, argv, std::cout, std::cerr);
}
