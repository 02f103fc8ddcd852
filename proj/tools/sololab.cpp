#include "sololab/cli.hpp"

int main(int argc, char** argv) { return sololab::cli::cli_main(argc, argv); }
