// cavbath CLI entry point

#include <iostream>
#include <vector>

#include "cavbath/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return cavbath::cli::run(args, std::cout, std::cerr);
}
