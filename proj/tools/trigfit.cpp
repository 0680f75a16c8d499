#include <iostream>

#include "trigfit/cli.hpp"

int main(int argc, char** argv)
{
    return trigfit::cli::run(argc, argv, std::cout, std::cerr);
}
