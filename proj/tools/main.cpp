#include <iostream>
#include <string>
#include <vector>

#include "torsor_lab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return torsor_lab::cli::run(args, std::cout, std::cerr);
}
