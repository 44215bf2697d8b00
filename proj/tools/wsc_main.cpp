#include <iostream>

#include "wsc/cli.hpp"

int main(int argc, char** argv) { return wsc::run_cli(argc, argv, std::cout, std::cerr); }
