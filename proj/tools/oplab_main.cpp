#include "oplab/cli.hpp"

int main(int argc, char** argv) { return oplab::cli::run(argc, argv); }
