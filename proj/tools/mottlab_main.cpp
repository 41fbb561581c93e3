#include <iostream>

#include "mottlab/cli.hpp"

int main(int argc, char** argv) { return mottlab::cli_main(argc, argv, std::cout, std::cerr); }
