#include <iostream>

#include "lpstab/cli.hpp"

int main(int argc, char** argv) { return lpstab::cli::main_entry(argc, argv, std::cout, std::cerr); }
