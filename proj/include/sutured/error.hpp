#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sutured {

/// Base class for every error raised by the toolkit. `name()` is the stable
/// identifier surfaced by the CLI.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(what), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

struct ArithmeticOverflow : Error {
  explicit ArithmeticOverflow(const std::string& w) : Error("ArithmeticOverflow", w) {}
};
struct GroupMismatch : Error {
  explicit GroupMismatch(const std::string& w) : Error("GroupMismatch", w) {}
};
struct InvalidHom : Error {
  explicit InvalidHom(const std::string& w) : Error("InvalidHom", w) {}
};
struct FiniteOrderElement : Error {
  explicit FiniteOrderElement(const std::string& w) : Error("FiniteOrderElement", w) {}
};
struct NotSymmetrizable : Error {
  explicit NotSymmetrizable(const std::string& w) : Error("NotSymmetrizable", w) {}
};
struct NotRepresentable : Error {
  explicit NotRepresentable(const std::string& w) : Error("NotRepresentable", w) {}
};
struct Indeterminate : Error {
  explicit Indeterminate(const std::string& w) : Error("Indeterminate", w) {}
};
struct ParityError : Error {
  explicit ParityError(const std::string& w) : Error("ParityError", w) {}
};
struct NegativeBlock : Error {
  explicit NegativeBlock(const std::string& w) : Error("NegativeBlock", w) {}
};
struct InvalidInput : Error {
  explicit InvalidInput(const std::string& w) : Error("InvalidInput", w) {}
};

/// Parse failure with a 1-based source location.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : Error("ParseError", format(msg, line, column)), message_(msg), line_(line), column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  /// Message without the location prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  static std::string format(const std::string& msg, int line, int column) {
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg;
  }
  std::string message_;
  int line_;
  int column_;
};

namespace checked {

inline std::int64_t add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw ArithmeticOverflow("integer overflow in addition");
  return r;
}
inline std::int64_t sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw ArithmeticOverflow("integer overflow in subtraction");
  return r;
}
inline std::int64_t mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw ArithmeticOverflow("integer overflow in multiplication");
  return r;
}
/// Representative of a mod m in [0, m).
inline std::int64_t mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}
/// Floor division for m > 0.
inline std::int64_t floor_div(std::int64_t a, std::int64_t m) {
  std::int64_t q = a / m;
  return (a % m != 0 && ((a < 0) != (m < 0))) ? q - 1 : q;
}

}  // namespace checked
}  // namespace sutured
