#include <iostream>

#include "bjw/cli.hpp"

int main(int argc, char** argv) { return bjw::cli::run(argc, argv, std::cout, std::cerr); }
