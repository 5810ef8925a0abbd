#pragma once

#include <iosfwd>

namespace ragkit {

// Routes argv to the ingest | index | rewrite | ask | forge | eval
// subcommands. Exit codes: 0 success, 1 user error, 2 provider/transport
// failure. Streams are injectable for tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace ragkit
