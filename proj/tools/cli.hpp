#pragma once

#include <string>
#include <vector>

namespace fracks::cli {

// Exit codes: 0 success, 1 domain error, 2 I/O error, 64 usage error.
int dispatch(const std::vector<std::string>& args);

}  // namespace fracks::cli
