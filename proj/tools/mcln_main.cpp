#include "mcln/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return mcln::run_cli(argc, argv, std::cout, std::cerr);
}
