#include "antparse/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    auto args = std::vector<std::string>(argv + 1, argv + argc);
    return antparse::run_cli(args, std::cout, std::cerr);
}
