#include <iostream>

#include "lobm/cli.hpp"

int main(int argc, char** argv) {
  return lobm::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
