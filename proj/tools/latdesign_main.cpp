#include <iostream>
#include <string>
#include <vector>

#include "latdesign/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return latdesign::run_command(args, std::cout, std::cerr).exit_code;
}
