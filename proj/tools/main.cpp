#include <iostream>
#include <vector>

#include "modcm/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return modcm::cli::run(args, std::cout, std::cerr);
}
