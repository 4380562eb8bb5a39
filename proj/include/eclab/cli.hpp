#pragma once

#include <iosfwd>
#include <string>
#include <vector>

// Command-line front end. `run` is the whole tool minus process plumbing, so
// tests can drive it in-process and compare outputs byte for byte.
namespace eclab::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,        // unknown flag, malformed value, missing seed
    kDomain = 2,       // domain or decode error; failed selftest
    kResource = 3,     // resource bound exceeded, unwritable output
};

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eclab::cli
