#include <iostream>

#include "polyproj_cli/commands.hpp"

int main(int argc, char** argv) { return polyproj::cli::run(argc, argv, std::cout, std::cerr); }
