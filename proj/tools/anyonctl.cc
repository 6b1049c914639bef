#include <iostream>

#include "anyon/cli.h"

int main(int argc, char** argv) {
  return anyon::cli::run_command(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
