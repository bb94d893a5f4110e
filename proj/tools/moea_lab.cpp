#include <iostream>
#include <string>
#include <vector>

#include "moea/lab.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return moea::lab::run_cli(args, std::cout, std::cerr);
}
