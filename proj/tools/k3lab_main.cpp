#include <iostream>

#include "k3lab/cli.hpp"

int main(int argc, char** argv) { return k3lab::cli::run(argc, argv, std::cout, std::cerr); }
