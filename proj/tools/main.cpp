#include <iostream>

#include "thermorec_cli/app.hpp"

int main(int argc, char** argv) { return thermorec::cli::run(argc, argv, std::cout, std::cerr); }
