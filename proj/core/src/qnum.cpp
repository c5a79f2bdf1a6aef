#include "qdeform/qnum.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qdeform/errors.hpp"

namespace qdeform {

namespace {

void require_nonnegative(int n, const char* what) {
  if (n < 0) {
    throw DomainError(std::string(what) + ": order must be nonnegative, got " +
                      std::to_string(n));
  }
}

// The shifted-factorial route is only defined for 0 < q < 1.
Real require_subunit(const QParam& q, const char* what) {
  if (q.value() >= 1.0) {
    throw DomainError(std::string(what) + " requires 0 < q < 1, got q = " +
                      std::to_string(q.value()));
  }
  return static_cast<Real>(q.value());
}

}  // namespace

QParam::QParam(double q) : value_(q), canonical_(q), classical_(false) {
  if (!std::isfinite(q) || q <= 0.0) {
    throw DomainError("deformation parameter must be finite and positive, got " +
                      std::to_string(q));
  }
  if (std::abs(q - 1.0) < kClassicalThreshold) {
    classical_ = true;
    canonical_ = 1.0;
  } else if (q > 1.0) {
    canonical_ = 1.0 / q;
  }
}

Real basic_number(Real x, const QParam& q) {
  if (!std::isfinite(x)) {
    throw DomainError("basic_number: argument must be finite");
  }
  if (q.classical()) return x;
  // sinh form avoids the cancellation in q^x - q^-x for small x.
  const Real lambda = std::log(static_cast<Real>(q.canonical()));
  return std::sinh(x * lambda) / std::sinh(lambda);
}

Real basic_factorial(int n, const QParam& q) {
  require_nonnegative(n, "basic_factorial");
  Real result = 1.0L;
  for (int k = 2; k <= n; ++k) result *= basic_number(k, q);
  return result;
}

Real q_shifted_factorial(Real a, Real base, int n) {
  require_nonnegative(n, "q_shifted_factorial");
  Real result = 1.0L;
  Real power = 1.0L;
  for (int k = 0; k < n; ++k) {
    result *= 1.0L - a * power;
    power *= base;
  }
  return result;
}

Real q_shifted_factorial(Real a, Real base, InfiniteOrder) {
  if (!(base > 0.0L && base < 1.0L)) {
    throw DomainError("infinite q-shifted factorial requires 0 < q < 1");
  }
  constexpr Real eps = std::numeric_limits<Real>::epsilon();
  constexpr int max_factors = 1'000'000;
  Real result = 1.0L;
  Real power = 1.0L;
  for (int k = 0; k < max_factors; ++k) {
    const Real step = a * power;
    if (std::abs(step) < eps) return result;
    result *= 1.0L - step;
    power *= base;
  }
  throw ConvergenceError("infinite q-shifted factorial did not converge",
                         max_factors);
}

Real basic_factorial_via_shifted(int n, const QParam& q) {
  return 1.0L / inverse_factorial_via_shifted(n, q);
}

Real inverse_factorial_via_shifted(int n, const QParam& q) {
  require_nonnegative(n, "basic_factorial_via_shifted");
  const Real base = require_subunit(q, "basic_factorial_via_shifted");
  const Real Q = base * base;
  const Real shifted = q_shifted_factorial(Q, Q, n);
  return std::pow(1.0L - Q, n) *
         std::pow(base, static_cast<Real>(n) * (n - 1) / 2) / shifted;
}

Real inverse_odd_factorial_via_shifted(int n, const QParam& q) {
  require_nonnegative(n, "inverse_odd_factorial_via_shifted");
  const Real base = require_subunit(q, "inverse_odd_factorial_via_shifted");
  const Real Q = base * base;
  const Real Q2 = Q * Q;
  const Real shifted =
      q_shifted_factorial(Q2, Q2, n) * q_shifted_factorial(Q2 * Q, Q2, n);
  // Q^{n(n+1/2)} = q^{n(2n+1)}
  return std::pow(1.0L - Q, 2 * n) *
         std::pow(base, static_cast<Real>(n) * (2 * n + 1)) / shifted;
}

Real inverse_even_factorial_via_shifted(int n, const QParam& q) {
  require_nonnegative(n, "inverse_even_factorial_via_shifted");
  const Real base = require_subunit(q, "inverse_even_factorial_via_shifted");
  const Real Q = base * base;
  const Real Q2 = Q * Q;
  const Real shifted =
      q_shifted_factorial(Q, Q2, n) * q_shifted_factorial(Q2, Q2, n);
  // Q^{n(n-1/2)} = q^{n(2n-1)}
  return std::pow(1.0L - Q, 2 * n) *
         std::pow(base, static_cast<Real>(n) * (2 * n - 1)) / shifted;
}

}  // namespace qdeform
