#include <iostream>

#include "pcl/cli.hpp"

int main(int argc, char** argv) { return pcl::run_cli(argc, argv, std::cout, std::cerr); }
