#include <iostream>

#include "latfront/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return latfront::run(args, std::cout, std::cerr);
}
