#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lsvv {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Entrywise observation mask; true means the label entry is observed.
using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;
using MaskRow = Eigen::Array<bool, Eigen::Dynamic, 1>;

/// Base of every exception thrown by the library.
class error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based, 0 when not tied to a line.
class parse_error : public error {
  public:
    parse_error(const std::string& what, std::size_t line)
        : error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

class parameter_error : public error {
  public:
    using error::error;
};

class dimension_error : public error {
  public:
    using error::error;
};

/// Non-finite values encountered during a computation.
class numerical_error : public error {
  public:
    using error::error;
};

/// Mixes a value into a running seed (splitmix64 finalizer). Stable across platforms.
[[nodiscard]] constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t value) noexcept {
    std::uint64_t z = seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

template <typename... Ts>
[[nodiscard]] constexpr std::uint64_t stable_seed(std::uint64_t seed, Ts... values) noexcept {
    ((seed = mix_seed(seed, static_cast<std::uint64_t>(values))), ...);
    return seed;
}

}  // namespace lsvv
