#include <iostream>

#include "bpn/cli.hpp"

int main(int argc, char** argv) { return bpn::run_cli(argc, argv, std::cout, std::cerr); }
