#pragma once

#include <ostream>

namespace mnemosim::cli {

/// Runs one invocation. Returns 0 on success, 1 on validation or domain
/// errors, 2 on usage errors. Results go to `out` (or --output), every
/// diagnostic to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mnemosim::cli
