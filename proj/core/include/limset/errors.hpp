#ifndef LIMSET_ERRORS_HPP
#define LIMSET_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace limset {

// Base class for all library failures. Subclasses distinguish bad input
// (dimension/parameter/config) from numeric capability limits so callers
// can map them to distinct exit codes.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

class dimension_error : public error {
 public:
  explicit dimension_error(const std::string& msg) : error(msg) {}
};

class parameter_error : public error {
 public:
  explicit parameter_error(const std::string& msg) : error(msg) {}
};

class config_error : public error {
 public:
  explicit config_error(const std::string& msg) : error(msg) {}
};

// Raised when a request is valid mathematically but exceeds what double
// precision (or the implemented numeric range) can represent.
class capability_error : public error {
 public:
  explicit capability_error(const std::string& msg) : error(msg) {}
};

}  // namespace limset

#endif
