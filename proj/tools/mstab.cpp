#include <iostream>

#include "mstab/cli.hpp"

int main(int argc, char** argv) { return mstab::cli::run(argc, argv, std::cout, std::cerr); }
