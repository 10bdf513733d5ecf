#include <iostream>

#include "wrdist/cli.hpp"

int main(int argc, char** argv) {
  return wrd::cli::run(argc, argv, std::cout, std::cerr);
}
