#include <iostream>

#include "cesgeom/cli/runners.hpp"

int main(int argc, char** argv) { return cesgeom::cli::run_cli(argc, argv, std::cout, std::cerr); }
