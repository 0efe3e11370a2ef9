#include <iostream>

#include "commaware/cli.hpp"

int main(int argc, char** argv) { return commaware::run_cli(argc, argv, std::cout, std::cerr); }
