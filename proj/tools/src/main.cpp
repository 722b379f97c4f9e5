#include "ldgbem_cli/conv_cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    const std::vector<std::string> args(argv + 1, argv + argc);
    return ldgbem::cli::run_main(args, std::cout, std::cerr);
}
