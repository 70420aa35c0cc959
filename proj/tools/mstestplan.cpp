#include <iostream>

#include "mstestplan_cli.hpp"

int main(int argc, char** argv) {
    return mstestplan::cli::run(argc, argv, std::cout, std::cerr);
}
