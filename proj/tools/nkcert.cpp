#include <iostream>
#include <string>
#include <vector>

#include "nkcert/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return nkcert::run_cli(args, std::cout, std::cerr);
}
