#include <iostream>

#include "poscomm/cli.hpp"

int main(int argc, char** argv) { return poscomm::cli::run(argc, argv, std::cout, std::cerr); }
