#pragma once

#include <ostream>
#include <string>

#include "ltesense/types.hpp"

namespace ltesense {

/// Renders a capture back into the estimation log text form. Reals carry six
/// fractional digits, so parse(format(c)) == c whenever c's values are
/// representable at that precision (every value a real log or emit_capture
/// produces is). Throws ValidationError on invariant violations.
std::string format_capture(const CsiCapture& capture);

void write_capture(const CsiCapture& capture, std::ostream& out);

}  // namespace ltesense
