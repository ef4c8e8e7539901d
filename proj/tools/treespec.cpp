#include <iostream>
#include <string>
#include <vector>

#include "treespec/cli_app.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return treespec::run_cli(args, std::cout, std::cerr);
}
