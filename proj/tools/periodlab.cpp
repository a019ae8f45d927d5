#include <iostream>

#include "periodlab/cli.hpp"

int main(int argc, char** argv) { return periodlab::cli::run(argc, argv, std::cout, std::cerr); }
