#include <iostream>

#include "hkqk/cli.hpp"

int main(int argc, char** argv) { return hkqk::cli::run(argc, argv, std::cout, std::cerr); }
