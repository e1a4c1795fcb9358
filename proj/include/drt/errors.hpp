#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace drt {

// Thrown when a prefix is too short to decide the question asked of it.
class ExtensionRequired : public std::runtime_error {
public:
    ExtensionRequired(std::size_t needed, const std::string& what)
        : std::runtime_error(what + " (needs length " + std::to_string(needed) + ")"),
          needed_(needed) {}
    std::size_t needed() const { return needed_; }

private:
    std::size_t needed_;
};

class DensityFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A bounded search ran out of budget without settling the answer.
class Inconclusive : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoSolutionFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OracleSoundnessError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace drt
