#include "magpulse/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return magpulse::cli::run(argc, argv, std::cout, std::cerr); }
