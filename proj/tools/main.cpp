#include <iostream>

#include "fastperm/cli/commands.hpp"

int main(int argc, char** argv) {
    return fastperm::cli::run(argc, argv, std::cout, std::cerr);
}
