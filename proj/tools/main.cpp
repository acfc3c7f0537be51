#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) { return gsn::cli::run(argc, argv, std::cout, std::cerr); }
