#include <iostream>

#include "pulseqsdc/commands.hpp"

int main(int argc, char** argv) { return pulseqsdc::cli::run(argc, argv, std::cout, std::cerr); }
