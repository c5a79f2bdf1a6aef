#include "qdeform/exprparse.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cctype>
#include <system_error>

namespace qdeform {

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;
using Kind = ExprNode::Kind;

constexpr int kMaxDepth = 200;

struct FunctionInfo {
  const char* name;
  int arity;
};

constexpr FunctionInfo kFunctions[] = {
    {"Cq", 1},  {"Eq", 1},  {"Sq", 1},    {"abs", 1},  {"cos", 1},
    {"exp", 1}, {"gauss", 1}, {"pow", 2}, {"sin", 1},  {"sqrt", 1},
};

const FunctionInfo* find_function(std::string_view name) {
  for (const auto& f : kFunctions) {
    if (name == f.name) return &f;
  }
  return nullptr;
}

std::string function_list() {
  std::string out;
  for (const auto& f : kFunctions) {
    if (!out.empty()) out += ", ";
    out += f.name;
  }
  return out;
}

std::shared_ptr<ExprNode> make(Kind kind, std::size_t offset) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->offset = offset;
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  NodePtr run() {
    NodePtr e = expr();
    skip();
    if (pos_ < s_.size()) fail("operator or end of input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& expected) const {
    throw ParseError(pos_, "expected " + expected);
  }

  void skip() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' ||
                                s_[pos_] == '\r')) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  struct DepthGuard {
    explicit DepthGuard(Parser& p) : p_(p) {
      if (++p_.depth_ > kMaxDepth) throw ParseError(p_.pos_, "expression nested too deeply");
    }
    ~DepthGuard() { --p_.depth_; }
    Parser& p_;
  };

  NodePtr binary(char op, NodePtr lhs, NodePtr rhs, std::size_t offset) {
    auto n = std::make_shared<ExprNode>();
    n->kind = Kind::binary;
    n->op = op;
    n->offset = offset;
    n->args = {std::move(lhs), std::move(rhs)};
    return n;
  }

  NodePtr expr() {
    DepthGuard guard(*this);
    NodePtr lhs = term();
    for (;;) {
      skip();
      const std::size_t at = pos_;
      if (accept('+')) {
        lhs = binary('+', lhs, term(), at);
      } else if (accept('-')) {
        lhs = binary('-', lhs, term(), at);
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      skip();
      const std::size_t at = pos_;
      if (accept('*')) {
        lhs = binary('*', lhs, factor(), at);
      } else if (accept('/')) {
        lhs = binary('/', lhs, factor(), at);
      } else {
        return lhs;
      }
    }
  }

  NodePtr factor() {
    DepthGuard guard(*this);
    NodePtr base = unary();
    skip();
    const std::size_t at = pos_;
    if (accept('^')) return binary('^', base, factor(), at);
    return base;
  }

  NodePtr unary() {
    skip();
    const std::size_t at = pos_;
    if (accept('-')) {
      auto n = std::make_shared<ExprNode>();
      n->kind = Kind::negate;
      n->offset = at;
      n->args = {primary()};
      return n;
    }
    return primary();
  }

  NodePtr number() {
    const std::size_t start = pos_;
    std::size_t i = pos_;
    auto digits = [&] {
      const std::size_t from = i;
      while (i < s_.size() && s_[i] >= '0' && s_[i] <= '9') ++i;
      return i - from;
    };
    std::size_t mantissa = digits();
    if (i < s_.size() && s_[i] == '.') {
      ++i;
      mantissa += digits();
    }
    if (mantissa == 0) {
      pos_ = i;
      fail("digit");
    }
    if (i < s_.size() && (s_[i] == 'e' || s_[i] == 'E')) {
      ++i;
      if (i < s_.size() && (s_[i] == '+' || s_[i] == '-')) ++i;
      if (digits() == 0) {
        pos_ = i;
        fail("exponent digits");
      }
    }
    double value = 0.0;
    const auto res = std::from_chars(s_.data() + start, s_.data() + i, value);
    if (res.ec != std::errc() || !std::isfinite(value)) {
      throw ParseError(start, "number out of range");
    }
    pos_ = i;
    auto n = make(Kind::number, start);
    n->value = value;
    return n;
  }

  NodePtr primary() {
    skip();
    const std::size_t at = pos_;
    if (pos_ >= s_.size()) fail("primary");
    const char c = s_[pos_];
    if ((c >= '0' && c <= '9') || c == '.') return number();
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      if (!accept(')')) fail("')'");
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t i = pos_;
      while (i < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[i])) || s_[i] == '_')) {
        ++i;
      }
      const std::string_view ident = s_.substr(pos_, i - pos_);
      if (ident == "x") {
        pos_ = i;
        return make(Kind::variable, at);
      }
      if (ident == "q") {
        pos_ = i;
        return make(Kind::parameter, at);
      }
      const FunctionInfo* f = find_function(ident);
      if (!f) {
        throw ParseError(at, "unknown identifier '" + std::string(ident) +
                                 "'; known functions: " + function_list() +
                                 "; variables: x, q");
      }
      pos_ = i;
      if (!accept('(')) fail("'(' after " + std::string(ident));
      auto n = std::make_shared<ExprNode>();
      n->kind = Kind::call;
      n->name = std::string(ident);
      n->offset = at;
      n->args.push_back(expr());
      while (accept(',')) n->args.push_back(expr());
      if (!accept(')')) fail("',' or ')'");
      if (static_cast<int>(n->args.size()) != f->arity) {
        throw ParseError(at, n->name + " takes " + std::to_string(f->arity) +
                                 (f->arity == 1 ? " argument" : " arguments") + ", got " +
                                 std::to_string(n->args.size()));
      }
      return n;
    }
    fail("primary");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

// Printing precedence: 1 additive, 2 multiplicative, 3 power, 4 negation,
// 5 primary.
int precedence(const ExprNode& n) {
  switch (n.kind) {
    case Kind::binary:
      return n.op == '+' || n.op == '-' ? 1 : n.op == '^' ? 3 : 2;
    case Kind::negate:
      return 4;
    default:
      return 5;
  }
}

void print(const ExprNode& n, std::string& out);

void print_wrapped(const ExprNode& n, bool wrap, std::string& out) {
  if (wrap) out += '(';
  print(n, out);
  if (wrap) out += ')';
}

void print(const ExprNode& n, std::string& out) {
  switch (n.kind) {
    case Kind::number: {
      char buf[32];
      const auto res = std::to_chars(buf, buf + sizeof buf, n.value);
      out.append(buf, res.ptr);
      return;
    }
    case Kind::variable:
      out += 'x';
      return;
    case Kind::parameter:
      out += 'q';
      return;
    case Kind::negate:
      out += '-';
      print_wrapped(*n.args[0], precedence(*n.args[0]) < 5, out);
      return;
    case Kind::call:
      out += n.name;
      out += '(';
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += ", ";
        print(*n.args[i], out);
      }
      out += ')';
      return;
    case Kind::binary: {
      const int p = precedence(n);
      const ExprNode& l = *n.args[0];
      const ExprNode& r = *n.args[1];
      if (n.op == '^') {
        print_wrapped(l, precedence(l) < 4, out);
        out += '^';
        print_wrapped(r, precedence(r) < 3, out);
        return;
      }
      print_wrapped(l, precedence(l) < p, out);
      if (p == 1) {
        out += ' ';
        out += n.op;
        out += ' ';
      } else {
        out += n.op;
      }
      print_wrapped(r, precedence(r) <= p, out);
      return;
    }
  }
}

bool finite(const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

Complex integer_power(Complex base, long long n, std::size_t offset) {
  if (n < 0) {
    if (base == Complex(0.0, 0.0)) throw EvaluationError(offset, "division by zero in power");
    base = 1.0 / base;
    n = -n;
  }
  Complex result = 1.0;
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

Complex power(Complex base, Complex exponent, std::size_t offset) {
  if (exponent.imag() == 0.0 && std::abs(exponent.real()) <= 1e6 &&
      exponent.real() == std::trunc(exponent.real())) {
    return integer_power(base, static_cast<long long>(exponent.real()), offset);
  }
  return std::pow(base, exponent);
}

struct Evaluator {
  Complex x;
  const QParam& q;
  double tol;

  Complex operator()(const ExprNode& n) const {
    const Complex v = eval(n);
    if (!finite(v)) throw EvaluationError(n.offset, "non-finite result");
    return v;
  }

  Complex eval(const ExprNode& n) const {
    switch (n.kind) {
      case Kind::number:
        return n.value;
      case Kind::variable:
        return x;
      case Kind::parameter:
        return q.value();
      case Kind::negate:
        return -(*this)(*n.args[0]);
      case Kind::binary: {
        const Complex a = (*this)(*n.args[0]);
        const Complex b = (*this)(*n.args[1]);
        switch (n.op) {
          case '+':
            return a + b;
          case '-':
            return a - b;
          case '*':
            return a * b;
          case '/':
            if (b == Complex(0.0, 0.0)) throw EvaluationError(n.offset, "division by zero");
            return a / b;
          default:
            return power(a, b, n.offset);
        }
      }
      case Kind::call:
        break;
    }
    const Complex z = (*this)(*n.args[0]);
    const std::string& f = n.name;
    if (f == "exp") return std::exp(z);
    if (f == "sin") return std::sin(z);
    if (f == "cos") return std::cos(z);
    if (f == "sqrt") return std::sqrt(z);
    if (f == "abs") return std::abs(z);
    if (f == "gauss") return std::exp(-z * z);
    try {
      if (f == "Eq") return q_exp(z, q, tol).value;
      if (f == "Sq") return q_sin(z, q, tol).value;
      if (f == "Cq") return q_cos(z, q, tol).value;
    } catch (const OverflowError& e) {
      throw EvaluationError(n.offset, e.what());
    }
    return power(z, (*this)(*n.args[1]), n.offset);
  }
};

}  // namespace

ParseError::ParseError(std::size_t offset, const std::string& message)
    : Error("parse error at offset " + std::to_string(offset) + ": " + message),
      offset_(offset),
      message_(message) {}

EvaluationError::EvaluationError(std::size_t offset, const std::string& message)
    : Error("evaluation error at offset " + std::to_string(offset) + ": " + message),
      offset_(offset) {}

const std::vector<std::string>& known_functions() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& f : kFunctions) v.emplace_back(f.name);
    return v;
  }();
  return names;
}

Expression parse(std::string_view text) {
  return Expression(Parser(text).run(), std::string(text));
}

std::string to_string(const Expression& e) {
  std::string out;
  if (!e.empty()) print(e.root(), out);
  return out;
}

Complex evaluate(const Expression& e, Complex x, const QParam& q, double tol) {
  if (e.empty()) throw EvaluationError(0, "empty expression");
  return Evaluator{x, q, tol}(e.root());
}

Evaluable to_evaluable(const Expression& e, const QParam& q, double tol) {
  return {[e, q, tol](double x) { return evaluate(e, x, q, tol); }};
}

}  // namespace qdeform
