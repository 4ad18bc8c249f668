#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cudseq::cli {

/// Exit codes: 0 ok, 1 property failure or short input, 2 usage, 3 capacity.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cudseq::cli
