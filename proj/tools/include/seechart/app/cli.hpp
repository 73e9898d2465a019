#pragma once

#include <iosfwd>

namespace seechart::app {

/// 0 ok, 1 usage error, 2 input error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace seechart::app
