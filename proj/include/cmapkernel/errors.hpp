#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cmapkernel {

/// Input could not be parsed. `line` is 1-based; 0 means "not line-specific".
class ParseError : public std::runtime_error {
public:
  ParseError(int line_, const std::string& reason_)
      : std::runtime_error("parse error at line " + std::to_string(line_) + ": " + reason_),
        line(line_), reason(reason_) {}
  int line;
  std::string reason;
};

/// A matrix entry breaks the divisibility constraint that makes the map well-defined.
class DivisibilityViolation : public std::runtime_error {
public:
  DivisibilityViolation(int row_, int col_, std::int64_t entry_, std::int64_t required_)
      : std::runtime_error("entry (" + std::to_string(row_) + "," + std::to_string(col_) +
                           ") = " + std::to_string(entry_) + " is not divisible by " +
                           std::to_string(required_)),
        row(row_), col(col_), entry(entry_), required(required_) {}
  int row, col;          // 0-based
  std::int64_t entry, required;
};

class ShapeMismatch : public std::invalid_argument {
public:
  explicit ShapeMismatch(const std::string& what_) : std::invalid_argument(what_) {}
};

class NotASubgroup : public std::invalid_argument {
public:
  explicit NotASubgroup(const std::string& what_) : std::invalid_argument(what_) {}
};

/// An enumeration would exceed its configured bound. `count` is the size that was requested.
class GuardExceeded : public std::runtime_error {
public:
  GuardExceeded(const std::string& what_, std::uint64_t count_, std::uint64_t guard_)
      : std::runtime_error(what_ + ": size " + std::to_string(count_) + " exceeds guard " +
                           std::to_string(guard_)),
        count(count_), guard(guard_) {}
  std::uint64_t count, guard;
};

/// A multiplication table fails a group axiom. `witness` holds the offending indices.
class NotAGroup : public std::runtime_error {
public:
  NotAGroup(const std::string& axiom_, int x_, int y_, int z_)
      : std::runtime_error("not a group: " + axiom_ + " fails at (" + std::to_string(x_) + "," +
                           std::to_string(y_) + "," + std::to_string(z_) + ")"),
        axiom(axiom_), x(x_), y(y_), z(z_) {}
  std::string axiom;
  int x, y, z;
};

class NotNormal : public std::invalid_argument {
public:
  explicit NotNormal(const std::string& what_) : std::invalid_argument(what_) {}
};

class NotAbelian : public std::invalid_argument {
public:
  explicit NotAbelian(const std::string& what_) : std::invalid_argument(what_) {}
};

class NotPPower : public std::invalid_argument {
public:
  explicit NotPPower(const std::string& what_) : std::invalid_argument(what_) {}
};

class NotClass2 : public std::invalid_argument {
public:
  NotClass2(int actual_class_)
      : std::invalid_argument("group has nilpotency class " + std::to_string(actual_class_) +
                              ", expected exactly 2"),
        actual_class(actual_class_) {}
  int actual_class;
};

class InvalidRecipe : public std::invalid_argument {
public:
  explicit InvalidRecipe(const std::string& what_) : std::invalid_argument(what_) {}
};

/// A proved relationship failed on concrete data. Signals a bug in this
/// library, never a bad input.
class InternalInconsistency : public std::logic_error {
public:
  explicit InternalInconsistency(const std::string& what_) : std::logic_error(what_) {}
};

}  // namespace cmapkernel
