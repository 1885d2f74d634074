#include <iostream>

#include "orka/cli.hpp"

int main(int argc, char** argv) { return orka::cli_main(argc, argv, std::cout, std::cerr); }
