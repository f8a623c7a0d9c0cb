#include <iostream>
#include <string>
#include <vector>

#include "twoqubit/cli.hpp"

int main(int argc, char** argv) {
    return twoqubit::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
