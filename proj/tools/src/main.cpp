#include <iostream>

#include "edltool/cli.hpp"

int main(int argc, char** argv) { return edltool::run(argc, argv, std::cout, std::cerr); }
