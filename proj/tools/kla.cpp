// Command-line entry point; subcommands are wired up in cli_main.
#include "kla/cli.hpp"

int main(int argc, char** argv) { return kla::cli_main(argc, argv); }
