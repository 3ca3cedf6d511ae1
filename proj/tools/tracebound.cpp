#include <iostream>

#include "tracebound/cli.hpp"

int main(int argc, char** argv) { return tracebound::run_cli(argc, argv, std::cout, std::cerr); }
