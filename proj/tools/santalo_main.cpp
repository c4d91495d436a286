#include <iostream>

#include "santalo/cli.hpp"

int main(int argc, char** argv) { return santalo::cli::run(argc, argv, std::cout, std::cerr); }
