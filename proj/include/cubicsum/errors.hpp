#pragma once

#include <stdexcept>
#include <string>

namespace cubicsum {

// Bad arguments: out-of-domain parameters, malformed CLI input, perfect-square d.
class invalid_input : public std::invalid_argument {
 public:
  explicit invalid_input(const std::string& what) : std::invalid_argument(what) {}
};

// A computation exceeded its configured budget (size caps, memory, precision).
class resource_error : public std::runtime_error {
 public:
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// The general factoring method gave up on a large cofactor within its budget.
class factoring_error : public std::runtime_error {
 public:
  explicit factoring_error(const std::string& what) : std::runtime_error(what) {}
};

// No denominator fits the requested bound (N too small for even the first convergent).
class no_approximation_error : public std::runtime_error {
 public:
  explicit no_approximation_error(const std::string& what) : std::runtime_error(what) {}
};

// The greedy factor split cannot meet its size targets or validation for (q, N).
class infeasible_split_error : public std::runtime_error {
 public:
  explicit infeasible_split_error(const std::string& what) : std::runtime_error(what) {}
};

// Internal consistency violation (e.g. a division that must be exact is not).
class internal_error : public std::logic_error {
 public:
  explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

}  // namespace cubicsum
