#include <iostream>

#include "milne/cli/app.hpp"

int main(int argc, char** argv) { return milne::cli::run(argc, argv, std::cout, std::cerr); }
