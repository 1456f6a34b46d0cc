#include "gfd/cli.hpp"

int main(int argc, char** argv) { return gfd::cli::main(argc, argv); }
