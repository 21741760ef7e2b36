#pragma once

#include <iosfwd>

namespace clausenlab::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

/// Parses argv, runs one subcommand and writes its JSON report to `out`
/// (or the --out path). Returns 0 when every gating check passes, 1 on a
/// failed check and 2 on a usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace clausenlab::cli
