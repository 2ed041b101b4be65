#include "ldg/cli.hpp"

int main(int argc, char** argv) { return ldg::cli::run(argc, argv); }
