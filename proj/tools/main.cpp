#include <iostream>

#include "volvol/cli.hpp"

int main(int argc, char** argv) { return volvol::cli::main(argc, argv, std::cout, std::cerr); }
