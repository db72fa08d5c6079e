#include <iostream>
#include <string>
#include <vector>

#include "repcause/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return repcause::run_cli(args, std::cout, std::cerr);
}
