#include <iostream>

#include "townsim/cli.hpp"

int main(int argc, char** argv) {
    return townsim::cli::main(argc, argv, std::cout, std::cerr);
}
