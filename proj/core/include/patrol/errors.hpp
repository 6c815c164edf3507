#pragma once

#include <stdexcept>
#include <string>

namespace patrol {

// Input violates a documented precondition.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// An exact solver was asked to exceed its documented size cap.
class SizeCapError : public std::runtime_error {
 public:
  explicit SizeCapError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace patrol
