#pragma once
#include <stdexcept>
#include <string>

namespace lgk {

// Malformed input text (config files, grid strings, CLI values). CLI exit code 2.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally valid input outside the supported domain. CLI exit code 3.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace lgk
