#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return gbsmock::cli::run(argc, argv, std::cout, std::cerr); }
