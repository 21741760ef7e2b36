#include <iostream>

#include "clausenlab/cli.hpp"

int main(int argc, char** argv) { return clausenlab::cli::run(argc, argv, std::cout, std::cerr); }
