#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tukey {

/// Malformed caller input: non-finite values, bad shapes, invalid arguments.
class input_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input that is structurally valid but admits no meaningful computation
/// (empty cloud, all observations coincide with the query, n <= p).
class degenerate_input_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The data violate the general-position assumption: p points of the data
/// together with the query lie on a common hyperplane through the query.
/// Carries the point indices that witnessed the violation.
class general_position_error : public std::runtime_error {
 public:
  general_position_error(std::string message, std::vector<std::int32_t> offending)
      : std::runtime_error(std::move(message)), offending_indices(std::move(offending)) {}

  std::vector<std::int32_t> offending_indices;
};

/// Raised by the exhaustive oracle when the requested instance exceeds its
/// cost guard and the caller did not force the computation.
class oracle_guard_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string index_list(const std::vector<std::int32_t>& idx) {
  std::string s = "{";
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(idx[i]);
  }
  s += "}";
  return s;
}

}  // namespace tukey
