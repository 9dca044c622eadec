#include "cli.hpp"

int main(int argc, char** argv) { return rgis::cli::main(argc, argv); }
