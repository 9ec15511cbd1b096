#include <iostream>
#include <string>
#include <vector>

#include "rpmsim/cli.h"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return rpm::cli::run(args, std::cout, std::cerr);
}
