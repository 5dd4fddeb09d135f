#include "cli.hpp"

int main(int argc, char** argv) { return omatch::cli::main(argc, argv); }
