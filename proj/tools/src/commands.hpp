#pragma once

namespace p300::cli {

/// Parses arguments, runs one subcommand and returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace p300::cli
