#include <iostream>

#include "nyqmirror/cli.hpp"

int main(int argc, char** argv) { return nyq::run_cli(argc, argv, std::cout, std::cerr); }
