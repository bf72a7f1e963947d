#pragma once

#include <iosfwd>

namespace syk::cli {

/// Entry point of the sykenum tool. Returns 0 on success, 1 when `check` finds a
/// mismatch and 2 on bad configuration or refused sizes.
int run(int argc, char** argv);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace syk::cli
