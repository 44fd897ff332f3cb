#include <iostream>

#include "entrate/cli.hpp"

int main(int argc, char** argv) { return entrate::cli::run(argc, argv, std::cout, std::cerr); }
