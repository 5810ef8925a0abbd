#include "ragkit/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return ragkit::run_cli(argc, argv, std::cout, std::cerr);
}
