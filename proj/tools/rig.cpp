#include <iostream>
#include <string>
#include <vector>

#include "rig/cli.hpp"

int main(int argc, char** argv) {
  return rig::cli::run(std::vector<std::string>(argv, argv + argc), std::cout,
                       std::cerr);
}
