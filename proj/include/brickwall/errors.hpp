#pragma once

#include <stdexcept>
#include <string>

namespace brickwall {

struct NotAProbability : std::runtime_error {
    explicit NotAProbability(const std::string& m) : std::runtime_error(m) {}
};

struct NotCritical : std::runtime_error {
    explicit NotCritical(const std::string& m) : std::runtime_error(m) {}
};

struct Degenerate : std::runtime_error {
    explicit Degenerate(const std::string& m) : std::runtime_error(m) {}
};

struct ZeroP0 : std::runtime_error {
    explicit ZeroP0(const std::string& m) : std::runtime_error(m) {}
};

struct InvalidN : std::runtime_error {
    explicit InvalidN(const std::string& m) : std::runtime_error(m) {}
};

// A strip or survey needed bricks outside the sampled window. Callers double
// the window and resample the whole strip (extending in place would bias the
// root brick's law).
struct WindowTooSmall : std::runtime_error {
    explicit WindowTooSmall(const std::string& m) : std::runtime_error(m) {}
};

struct OverflowError : std::runtime_error {
    explicit OverflowError(const std::string& m) : std::runtime_error(m) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& m) : std::runtime_error(m) {}
};

struct TooFewSamples : std::runtime_error {
    explicit TooFewSamples(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace brickwall
