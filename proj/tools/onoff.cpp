#include <iostream>

#include "onoff/cli.hpp"

int main(int argc, char** argv) { return onoff::cli::run_cli(argc, argv, std::cout, std::cerr); }
