#include <iostream>

#include "rotwalk/cli/app.hpp"

int main(int argc, char** argv)
{
    return rotwalk::cli::run(argc, argv, std::cout, std::cerr);
}
