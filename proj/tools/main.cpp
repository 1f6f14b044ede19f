#include <iostream>

#include "rankaudit/cli.hpp"

int main(int argc, char** argv) {
  return rankaudit::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
