#pragma once

#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "cubicsum/weyl_sums.hpp"

namespace cubicsum {

// Parses the alpha grammar: `sqrt:<d>` | `quad:<f>,<g>,<c>,<d>` | `rat:<a>/<q>`.
// Throws invalid_input on malformed text or invalid parameters.
Alpha parse_alpha(const std::string& text);

// Runs one CLI invocation (args excludes the program name) and writes the
// report to `out` or to --out.  Returns 0 on success, 2 on invalid input,
// 3 when a computation exceeds its budget, 4 when a verification suite fails.
int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace cubicsum
