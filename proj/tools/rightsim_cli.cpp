#include "rightsim/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return rightsim::run_cli(argc, argv, std::cout, std::cerr); }
