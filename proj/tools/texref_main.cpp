#include "texref/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return texref::cli::run(argc, argv, std::cout, std::cerr);
}
