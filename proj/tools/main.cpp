#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return congest_light::cli::run(argc, argv, std::cout, std::cerr); }
