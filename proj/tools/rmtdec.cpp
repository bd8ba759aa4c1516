#include "rmtdec/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return rmtdec::run_cli(argc, argv, std::cout, std::cerr); }
