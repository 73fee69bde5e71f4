#include <iostream>

#include "crs/harness.hpp"

int main(int argc, char** argv) { return crs::cli_dispatch(argc, argv, std::cout, std::cerr); }
