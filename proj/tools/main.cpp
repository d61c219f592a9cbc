#include "cli/commands.hpp"

int main(int argc, char** argv) { return ssns::cli::run_cli(argc, argv); }
