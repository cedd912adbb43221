#include <iostream>
#include <string>
#include <vector>

#include "hwe_equiv/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return hwe_equiv::cli::run(args, std::cout, std::cerr);
}
