#include <dynabt/cli.hpp>

#include <iostream>

int main(int argc, char **argv)
{
    return dynabt::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
