#include <iostream>

#include "filco/cli.hpp"

int main(int argc, char** argv) { return filco::cli::run(argc, argv, std::cout, std::cerr); }
