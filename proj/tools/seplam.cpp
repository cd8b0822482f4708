#include <iostream>

#include "seplam/cli.hpp"

int main(int argc, char** argv) { return seplam::run_cli(argc, argv, std::cout, std::cerr); }
