#include <iostream>

#include "gwn/cli/commands.hpp"

int main(int argc, char** argv) { return gwn::cli::run(argc, argv, std::cout, std::cerr); }
