#include <iostream>
#include <string>
#include <vector>

#include "clusterdiag/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return clusterdiag::run(args, std::cout, std::cerr);
}
