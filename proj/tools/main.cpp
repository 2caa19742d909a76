#include "cli_commands.hpp"

int main(int argc, char** argv) { return isq::cli::run(argc, argv); }
