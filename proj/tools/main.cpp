#include <iostream>

#include "bipfunc/cli.hpp"

int main(int argc, char** argv) { return bipfunc::cli::run(argc, argv, std::cout, std::cerr); }
