#include <iostream>

#include "mmsched_tools/cli.hpp"

int main(int argc, char** argv) { return mmsched::cli::main_entry(argc, argv, std::cerr); }
