#include <iostream>

#include "rsfde/cli.hpp"

int main(int argc, char** argv)
{
    return rsfde::cli_main(argc, argv, std::cout, std::cerr);
}
