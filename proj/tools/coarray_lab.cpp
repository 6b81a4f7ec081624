#include <iostream>

#include "coarray/cli.hpp"

int main(int argc, char** argv) {
    return coarray::cli_main(argc, argv, std::cout, std::cerr);
}
