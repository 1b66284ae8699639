// main.cpp: qbm command-line entry point

#include <iostream>

#include "qbm/cli.hpp"

int main(int argc, char** argv) {
    return qbm::cli::main_entry(argc, argv, std::cout, std::cerr);
}
