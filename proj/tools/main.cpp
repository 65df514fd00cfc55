#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return laakso::cli::run_cli(args, std::cout, std::cerr);
}
