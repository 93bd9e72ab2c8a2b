#include <iostream>

#include "hmt/cli.hpp"

int main(int argc, char** argv) { return hmt::cli_main(argc, argv, std::cout, std::cerr); }
