#pragma once

#include <stdexcept>
#include <string>

namespace ltesense {

/// Positioned error raised while parsing a CSI estimation log.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, int record_index, int line_number)
      : std::runtime_error("line " + std::to_string(line_number) +
                           (record_index >= 0 ? ", record " + std::to_string(record_index) : std::string()) +
                           ": " + what),
        record_index_(record_index),
        line_number_(line_number) {}

  int record_index() const { return record_index_; }  // 0-based, -1 outside any record
  int line_number() const { return line_number_; }    // 1-based

private:
  int record_index_;
  int line_number_;
};

/// Invalid configuration or violated type invariant.
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Failure inside a processing stage (axis mismatch, short trace, ...).
class ProcessingError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace ltesense
