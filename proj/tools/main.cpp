#include "hintrl/cli/cli.hpp"

int main(int argc, char** argv) { return hintrl::cli::run_cli(argc, argv); }
