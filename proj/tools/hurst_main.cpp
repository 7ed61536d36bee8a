#include "hurst/cli_main.hpp"

int main(int argc, char** argv) { return hurst::cli::run_cli(argc, argv); }
