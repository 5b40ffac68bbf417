#include "pspec/cli.hpp"

int main(int argc, char** argv) { return pspec::cli::main(argc, argv); }
