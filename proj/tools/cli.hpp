#ifndef ADVPIPE_TOOLS_CLI_HPP
#define ADVPIPE_TOOLS_CLI_HPP

namespace advpipe::cli {

/// Full command-line entry point (argument parsing, subcommand dispatch,
/// diagnostics). Returns the process exit code: 0 success, 1 runtime
/// failure, 2 usage error.
int cli_main(int argc, const char* const* argv);

}  // namespace advpipe::cli

#endif
