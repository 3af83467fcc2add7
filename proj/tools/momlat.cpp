// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "momlat/cli.hpp"

int main(int argc, char** argv)
{
    return momlat::cli::run(argc, argv, std::cout, std::cerr);
}
