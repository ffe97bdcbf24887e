#include <iostream>
#include <string>
#include <vector>

#include "snsmq/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return snsmq::cli::run(args, std::cout, std::cerr);
}
