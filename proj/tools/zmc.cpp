#include <iostream>

#include "zmc/cli/commands.hpp"

int main(int argc, char** argv) { return zmc::cli::run(argc, argv, std::cout, std::cerr); }
