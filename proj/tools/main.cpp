#include "commands.hpp"

int main(int argc, char** argv) { return p300::cli::run_cli(argc, argv); }
