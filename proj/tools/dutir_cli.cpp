#include <iostream>

#include "dutir/cli.hpp"

int main(int argc, char** argv) { return dutir::cli::run(argc, argv, std::cout, std::cerr); }
