#pragma once

// Symmetric basic numbers, q-factorials and q-shifted factorials.
//
// All quantities are evaluated in long double. Symmetric quantities use the
// canonical parameter min(q, 1/q); shifted factorials (a;q)_n use the raw
// base because they are not q <-> 1/q symmetric.

namespace qdeform {

using Real = long double;

/// |q - 1| below this selects the classical (undeformed) branch.
inline constexpr double kClassicalThreshold = 1e-12;

class QParam {
 public:
  /// Throws DomainError unless q is finite and positive.
  explicit QParam(double q);

  double value() const noexcept { return value_; }
  /// min(q, 1/q), exactly 1 on the classical branch.
  double canonical() const noexcept { return canonical_; }
  bool classical() const noexcept { return classical_; }

  friend bool operator==(const QParam&, const QParam&) = default;

 private:
  double value_;
  double canonical_;
  bool classical_;
};

/// [x] = (q^x - q^-x) / (q - q^-1); returns x on the classical branch.
Real basic_number(Real x, const QParam& q);

/// [n]! = [n][n-1]...[1], [0]! = 1.
Real basic_factorial(int n, const QParam& q);

struct InfiniteOrder {};
inline constexpr InfiniteOrder infinite_order{};

/// (a; base)_n = prod_{k<n} (1 - a base^k).
Real q_shifted_factorial(Real a, Real base, int n);
/// (a; base)_inf; requires 0 < base < 1.
Real q_shifted_factorial(Real a, Real base, InfiniteOrder);

inline Real q_shifted_factorial(Real a, const QParam& q, int n) {
  return q_shifted_factorial(a, static_cast<Real>(q.value()), n);
}
inline Real q_shifted_factorial(Real a, const QParam& q, InfiniteOrder tag) {
  return q_shifted_factorial(a, static_cast<Real>(q.value()), tag);
}

// Basic-hypergeometric route to the symmetric factorials. With Q = q^2,
//
//   1/[n]!    = (1-Q)^n q^{n(n-1)/2} / (Q;Q)_n
//   1/[2n+1]! = (1-Q)^{2n+1} Q^{n(n+1/2)} / ((1-Q) (Q^2;Q^2)_n (Q^3;Q^2)_n)
//   1/[2n]!   = (1-Q)^{2n} Q^{n(n-1/2)} / ((Q;Q^2)_n (Q^2;Q^2)_n)
//
// The base must be q^2: with base q the first line is the reciprocal of an
// asymmetric factorial and differs from 1/[n]! already at n = 2.
// All three require 0 < q < 1.

/// [n]! through the shifted-factorial route; must agree with basic_factorial.
Real basic_factorial_via_shifted(int n, const QParam& q);
Real inverse_factorial_via_shifted(int n, const QParam& q);
Real inverse_odd_factorial_via_shifted(int n, const QParam& q);
Real inverse_even_factorial_via_shifted(int n, const QParam& q);

}  // namespace qdeform
