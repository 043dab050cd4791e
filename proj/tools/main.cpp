#include <iostream>

#include "cndisc/cli/commands.hpp"

int main(int argc, char** argv) {
    return cndisc::cli::run_cli(argc, argv, std::cout, std::cerr);
}
