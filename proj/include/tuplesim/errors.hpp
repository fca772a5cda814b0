#pragma once

#include <stdexcept>
#include <string>

namespace tuplesim {

// Bad or missing input data (maps to CLI exit code 2).
class data_error : public std::runtime_error {
 public:
  explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

// A numerical routine failed to converge or produced garbage (exit code 3).
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tuplesim
