#include "agewise/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    std::ios::sync_with_stdio(false);
    return agewise::cli::main_entry({argv + 1, argv + argc}, std::cout, std::cerr);
}
