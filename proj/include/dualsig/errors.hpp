#pragma once

#include <stdexcept>
#include <string>

namespace dualsig {

/// Malformed or out-of-contract input data (lengths, non-finite values).
class invalid_input_error : public std::runtime_error {
 public:
  explicit invalid_input_error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad configuration: hyperparameters, scheme parameters, CLI options.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Structurally valid input on which the requested statistic is undefined
/// (constant series, zero variance, zero bandwidth).
class degenerate_input_error : public std::runtime_error {
 public:
  explicit degenerate_input_error(const std::string& what) : std::runtime_error(what) {}
};

/// Query point outside the domain of a gridded object.
class out_of_domain_error : public std::runtime_error {
 public:
  explicit out_of_domain_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dualsig
