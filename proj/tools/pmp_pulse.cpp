#include <iostream>
#include <string>
#include <vector>

#include "rydpmp/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return rydpmp::run_cli(args, std::cout, std::cerr);
}
