#pragma once

#include <stdexcept>
#include <string>

namespace advsim {

/// Malformed configuration or fixture content (bad rows, bad keys, bad values).
class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Scenario that cannot be realized, e.g. brake distance at or beyond the
/// usable detection range.
class InfeasibleError : public std::runtime_error {
public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

/// Missing or unwritable files.
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace advsim
