#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qfa::cli {

// Runs one command line (without argv[0]); deterministic output for a fixed
// configuration. Returns the process exit status: 0 on success, nonzero on
// errors or FAIL verdicts.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qfa::cli
