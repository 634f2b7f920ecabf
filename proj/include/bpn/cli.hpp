#pragma once

#include <ostream>

namespace bpn {

// Entry point of the command-line tool. Returns the process exit code:
// 0 on success, 1 on domain errors, 2 on usage errors.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace bpn
