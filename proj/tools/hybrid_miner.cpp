#include <iostream>

#include "hybrid_miner/cli.hpp"

int main(int argc, char** argv) { return hybrid_miner::run_cli(argc, argv, std::cin, std::cout, std::cerr); }
