#include <iostream>

#include "callflow/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return callflow::run_cli(args, std::cout, std::cerr);
}
