#pragma once

#include <istream>
#include <string>

#include "ltesense/errors.hpp"
#include "ltesense/types.hpp"

namespace ltesense {

/// Parses a CSI estimation log ([ESTIMATION] ... [END ESTIMATION] records)
/// into a capture. Field values are kept exactly as written; no unit
/// conversion happens here. Unknown header lines are preserved so a
/// reformatted capture reproduces them. Throws ParseError with record index
/// and line number on malformed input.
CsiCapture parse_capture(std::istream& in);

CsiCapture parse_capture_file(const std::string& path);

/// Validates the capture-level invariants (non-decreasing timestamps,
/// shared (port,rx) key set and column counts). Throws ValidationError.
void validate_capture(const CsiCapture& capture);

}  // namespace ltesense
