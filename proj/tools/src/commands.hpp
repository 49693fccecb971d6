#ifndef ORLICZ_TOOLS_COMMANDS_HPP_
#define ORLICZ_TOOLS_COMMANDS_HPP_

#include <iosfwd>

namespace orlicz::cli
{

enum ExitCode : int
{
  kSuccess = 0,
  kConfigError = 1,
  kNotConverged = 2,
  kCertificateFailed = 3,
};

/// Full command line entry point; argv[0] is the program name.
int run(int argc, const char * const * argv, std::ostream & out, std::ostream & err);

}  // namespace orlicz::cli

#endif  // ORLICZ_TOOLS_COMMANDS_HPP_
