#include <iostream>
#include <string>
#include <vector>

#include "opmeans/cli.hpp"

int main(int argc, char** argv) {
  return opmeans::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
