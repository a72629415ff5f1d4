#include <iostream>

#include "bsdsynth/cli.hpp"

int main(int argc, char** argv) { return bsdsynth::run_cli(argc, argv, std::cout, std::cerr); }
