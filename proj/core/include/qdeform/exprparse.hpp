#pragma once

// Expression language for potentials and test functions.
//
//   expr    := term (('+' | '-') term)*
//   term    := factor (('*' | '/') factor)*
//   factor  := unary ('^' factor)?
//   unary   := '-'? primary
//   primary := number | 'x' | 'q' | ident '(' expr (',' expr)* ')' | '(' expr ')'
//
// '^' is right-associative and binds to the signed operand on its left, so
// -x^2 is (-x)^2. Functions: exp sin cos sqrt abs gauss Eq Sq Cq (one
// argument) and pow (two). gauss(z) = exp(-z^2).

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "qdeform/errors.hpp"
#include "qdeform/qcalculus.hpp"
#include "qdeform/qfunctions.hpp"

namespace qdeform {

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& message);
  /// 0-based character offset into the source text.
  std::size_t offset() const noexcept { return offset_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t offset_;
  std::string message_;
};

class EvaluationError : public Error {
 public:
  EvaluationError(std::size_t offset, const std::string& message);
  /// Offset of the offending node in the source text.
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

struct ExprNode {
  enum class Kind { number, variable, parameter, negate, binary, call };

  Kind kind = Kind::number;
  double value = 0.0;         ///< number
  char op = 0;                ///< binary: + - * / ^
  std::string name;           ///< call
  std::vector<std::shared_ptr<const ExprNode>> args;
  std::size_t offset = 0;
};

class Expression {
 public:
  Expression() = default;
  explicit Expression(std::shared_ptr<const ExprNode> root, std::string source = {})
      : root_(std::move(root)), source_(std::move(source)) {}

  const ExprNode& root() const { return *root_; }
  bool empty() const noexcept { return root_ == nullptr; }
  /// The text it was parsed from, if any.
  const std::string& source() const noexcept { return source_; }

 private:
  std::shared_ptr<const ExprNode> root_;
  std::string source_;
};

/// Built-in function names, sorted.
const std::vector<std::string>& known_functions();

Expression parse(std::string_view text);

/// Canonical text: parse(to_string(e)) prints back to the same string.
std::string to_string(const Expression& e);

/// Integer powers are evaluated by repeated multiplication.
Complex evaluate(const Expression& e, Complex x, const QParam& q,
                 double tol = kDefaultSeriesTol);

Evaluable to_evaluable(const Expression& e, const QParam& q,
                       double tol = kDefaultSeriesTol);

}  // namespace qdeform
