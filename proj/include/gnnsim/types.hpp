#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gnnsim {

using VertexId = std::uint32_t;
using EdgeId = std::uint64_t;
using PartId = std::uint32_t;

// Config/input problems. The CLI maps these to exit code 1.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input file (edge list, config file). Also exit code 1.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// A feature store does not fit its per-device budget.
struct CapacityError : std::runtime_error {
    explicit CapacityError(const std::string& msg) : std::runtime_error(msg) {}
};

// No feasible accelerator configuration exists. Exit code 2.
struct EmptySpaceError : std::runtime_error {
    explicit EmptySpaceError(const std::string& msg) : std::runtime_error(msg) {}
};

// Coefficient calibration cannot be solved from the given points.
struct CalibrationError : std::runtime_error {
    explicit CalibrationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Matrix/vector dimensions do not line up.
struct ShapeError : std::runtime_error {
    explicit ShapeError(const std::string& msg) : std::runtime_error(msg) {}
};

// Internal invariant violation. Exit code 3.
struct InvariantError : std::logic_error {
    explicit InvariantError(const std::string& msg) : std::logic_error(msg) {}
};

// splitmix64: cheap, well-mixed seed derivation for independent RNG streams.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    return mix_seed(a + 0x9e3779b97f4a7c15ull * b);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix_seed(mix_seed(a, b), c);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                              std::uint64_t d) {
    return mix_seed(mix_seed(a, b, c), d);
}

}  // namespace gnnsim
