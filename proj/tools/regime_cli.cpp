#include <iostream>

#include "regime/cli.hpp"

int main(int argc, char** argv) {
    return regime::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
