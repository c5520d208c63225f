#include <iostream>

#include "strata/cli.hpp"

int main(int argc, char** argv)
{
    return strata::cli::run(argc, argv, std::cout, std::cerr);
}
