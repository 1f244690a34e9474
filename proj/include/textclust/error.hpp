#pragma once

#include <stdexcept>
#include <string>

namespace textclust {

// File-system level failures: missing input, unwritable output.
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

// Content-level failures: bad schema, undated documents, empty feature
// spaces. Distinct from std::invalid_argument, which is reserved for
// caller contract violations (k == 0, overlapping arities, ...).
class data_error : public std::runtime_error {
public:
    explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace textclust
