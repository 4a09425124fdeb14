#include "desitter/cli.hpp"

int main(int argc, char** argv) { return desitter::cli::main_entry(argc, argv); }
