#include "tritrophic/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return tritrophic::run_command(argc, argv, std::cout, std::cerr); }
