#pragma once

#include <iosfwd>
#include <string>

#include "config.hpp"

namespace cli {

enum ExitCode : int {
  kOk = 0,
  kError = 1,  // bad configuration or input
  kGuardExceeded = 2,
  kAuditFailure = 3,
  kTransferMismatch = 4,
};

int cmd_enumerate(const RunConfig& c, std::ostream& log);
int cmd_volume(const RunConfig& c, std::ostream& log);
int cmd_convolve(const RunConfig& c, std::ostream& log);
int cmd_verify(const RunConfig& c, std::ostream& log);
int cmd_transfer(const RunConfig& c, std::ostream& log);
int cmd_eisenstein(const RunConfig& c, std::ostream& log);

// Dispatches by name and maps exceptions to exit codes.
int run_command(const std::string& name, const RunConfig& c, std::ostream& log, std::ostream& err);

}  // namespace cli
