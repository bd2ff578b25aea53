#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace actsearch {

struct ParamArityMismatch : std::invalid_argument {
  ParamArityMismatch(std::size_t expected, std::size_t got)
      : std::invalid_argument("parameter arity mismatch: expected " +
                              std::to_string(expected) + ", got " +
                              std::to_string(got)),
        expected(expected),
        got(got) {}
  std::size_t expected;
  std::size_t got;
};

struct ParseError : std::invalid_argument {
  ParseError(std::string message, std::size_t offset)
      : std::invalid_argument(message + " (at offset " +
                              std::to_string(offset) + ")"),
        offset(offset) {}
  std::size_t offset;
};

struct ShapeMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct LayerOutOfRange : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct SpaceTooLarge : std::runtime_error {
  SpaceTooLarge(std::uint64_t count, std::uint64_t budget)
      : std::runtime_error("search space has " + std::to_string(count) +
                           " candidates, over the exhaustive budget of " +
                           std::to_string(budget) +
                           "; use the RL controller instead"),
        count(count),
        budget(budget) {}
  std::uint64_t count;
  std::uint64_t budget;
};

struct EmptyComparison : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NoTrainableBeta : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct CacheCorrupt : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace actsearch
