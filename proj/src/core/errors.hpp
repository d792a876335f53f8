#pragma once

#include <stdexcept>
#include <string>

namespace cascade {

// Error categories, mirrored by the C API status codes and the CLI exit codes.
enum class ErrorKind { validation = 2, physicality = 3, resource = 4 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Malformed input: schema violations, out-of-range parameters, bad indices.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& msg) : Error(ErrorKind::validation, msg) {}
};

// Input is well-formed but inconsistent with a physical network
// (negative rates beyond tolerance, pruning recursion leaving [0,1], ...).
class PhysicalityError : public Error {
 public:
  explicit PhysicalityError(const std::string& msg) : Error(ErrorKind::physicality, msg) {}
};

// Request exceeds an enforced size cap.
class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& msg) : Error(ErrorKind::resource, msg) {}
};

}  // namespace cascade
