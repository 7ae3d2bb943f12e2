#pragma once

#include <stdexcept>
#include <string>

namespace projgraph {

/// File could not be read or written.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Input violated a precondition (bad id, malformed line, non-total mapping, ...).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// The request is well-formed but cannot be satisfied by any computation
/// (e.g. sampling more distinct endpoints than the graph has).
class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace projgraph
