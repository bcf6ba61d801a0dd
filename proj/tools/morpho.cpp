#include <iostream>

#include "morpho/cli.hpp"

int main(int argc, char** argv) { return morpho::cli::main(argc, argv, std::cout, std::cerr); }
