#include <iostream>

#include "argmine/cli.hpp"

int main(int argc, char** argv) { return argmine::run_cli(argc, argv, std::cout, std::cerr); }
