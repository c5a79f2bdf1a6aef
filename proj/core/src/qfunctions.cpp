#include "qdeform/qfunctions.hpp"

#include <cmath>
#include <string>

#include "qdeform/errors.hpp"

namespace qdeform {

namespace {

using LongComplex = std::complex<long double>;

constexpr int kMaxSeriesTerms = 100'000;

LongComplex widen(Complex z) { return {z.real(), z.imag()}; }
Complex narrow(LongComplex z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

bool finite(const LongComplex& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Sums next_term(k, previous) for k = 0, 1, ... under the shared stopping
// rule. next_term receives the previous term to allow ratio recurrences.
template <typename NextTerm>
QSpecialValue sum_series(NextTerm next_term, double tol, Representation rep,
                         const char* name) {
  LongComplex sum = 0.0L;
  LongComplex term = 0.0L;
  int small = 0;
  for (int k = 0; k < kMaxSeriesTerms; ++k) {
    term = next_term(k, term);
    sum += term;
    if (!finite(sum) || !finite(term)) {
      throw OverflowError(std::string(name) +
                          ": series left the representable range");
    }
    if (std::abs(term) <= static_cast<long double>(tol) * std::abs(sum)) {
      if (++small >= 3) {
        const Complex value = narrow(sum);
        if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
          throw OverflowError(std::string(name) + ": result exceeds the double range");
        }
        return {value, k + 1, rep};
      }
    } else {
      small = 0;
    }
  }
  throw ConvergenceError(std::string(name) + " did not converge", kMaxSeriesTerms);
}

Real bn(int k, const QParam& q) { return basic_number(static_cast<Real>(k), q); }

}  // namespace

QSpecialValue q_exp(Complex z, const QParam& q, double tol) {
  const LongComplex w = widen(z);
  return sum_series(
      [&](int k, LongComplex prev) -> LongComplex {
        return k == 0 ? LongComplex(1.0L) : prev * w / bn(k, q);
      },
      tol, Representation::physics_series, "q_exp");
}

QSpecialValue q_sin(Complex z, const QParam& q, double tol) {
  const LongComplex w = widen(z);
  const LongComplex minus_w2 = -w * w;
  return sum_series(
      [&](int n, LongComplex prev) -> LongComplex {
        return n == 0 ? w : prev * minus_w2 / (bn(2 * n, q) * bn(2 * n + 1, q));
      },
      tol, Representation::physics_series, "q_sin");
}

QSpecialValue q_cos(Complex z, const QParam& q, double tol) {
  const LongComplex w = widen(z);
  const LongComplex minus_w2 = -w * w;
  return sum_series(
      [&](int n, LongComplex prev) -> LongComplex {
        return n == 0 ? LongComplex(1.0L)
                      : prev * minus_w2 / (bn(2 * n - 1, q) * bn(2 * n, q));
      },
      tol, Representation::physics_series, "q_cos");
}

// The shifted-factorial series evaluate each coefficient from scratch through
// the (a;q)_n products; only the power of z is carried between terms.

QSpecialValue q_exp_shifted(Complex z, const QParam& q, double tol) {
  const LongComplex w = widen(z);
  LongComplex power = 1.0L;
  return sum_series(
      [&](int k, LongComplex) -> LongComplex {
        if (k > 0) power *= w;
        return inverse_factorial_via_shifted(k, q) * power;
      },
      tol, Representation::shifted_factorial_series, "q_exp_shifted");
}

QSpecialValue q_sin_shifted(Complex z, const QParam& q, double tol) {
  const LongComplex w = widen(z);
  const LongComplex w2 = w * w;
  LongComplex power = w;
  return sum_series(
      [&](int n, LongComplex) -> LongComplex {
        if (n > 0) power *= -w2;
        return inverse_odd_factorial_via_shifted(n, q) * power;
      },
      tol, Representation::shifted_factorial_series, "q_sin_shifted");
}

QSpecialValue q_cos_shifted(Complex z, const QParam& q, double tol) {
  const LongComplex w = widen(z);
  const LongComplex w2 = w * w;
  LongComplex power = 1.0L;
  return sum_series(
      [&](int n, LongComplex) -> LongComplex {
        if (n > 0) power *= -w2;
        return inverse_even_factorial_via_shifted(n, q) * power;
      },
      tol, Representation::shifted_factorial_series, "q_cos_shifted");
}

Evaluable q_exp_function(Complex a, const QParam& q, double tol) {
  return {[a, q, tol](double x) { return q_exp(a * x, q, tol).value; }};
}

Evaluable q_sin_function(Complex a, const QParam& q, double tol) {
  return {[a, q, tol](double x) { return q_sin(a * x, q, tol).value; }};
}

Evaluable q_cos_function(Complex a, const QParam& q, double tol) {
  return {[a, q, tol](double x) { return q_cos(a * x, q, tol).value; }};
}

Residual q_pythagoras_residual(double x, const QParam& q) {
  const double p = q.canonical();
  const Complex ss = q_sin(x / p, q).value * q_sin(x, q).value;
  const Complex cc = q_cos(x / p, q).value * q_cos(x, q).value;
  return {std::abs(ss + cc - 1.0), std::max(1.0, std::abs(ss) + std::abs(cc))};
}

Residual trig_derivative_residual(double x, double a, const QParam& q,
                                  TrigKind which) {
  if (x == 0.0) throw DomainError("trig_derivative_residual requires x != 0");
  const Evaluable u = which == TrigKind::sin ? q_sin_function(a, q)
                                             : q_cos_function(a, q);
  const Complex derivative = jackson_derivative(u, x, q);
  const Complex expected = which == TrigKind::sin ? a * q_cos(a * x, q).value
                                                  : -a * q_sin(a * x, q).value;
  return {std::abs(derivative - expected),
          first_derivative_scale(u, x, q) + std::abs(derivative) +
              std::abs(expected)};
}

Residual wave_equation_residual(WaveSolution solution, double a, double x,
                                const QParam& q) {
  if (x == 0.0) throw DomainError("wave_equation_residual requires x != 0");
  Evaluable u;
  switch (solution) {
    case WaveSolution::sin:
      u = q_sin_function(a, q);
      break;
    case WaveSolution::cos:
      u = q_cos_function(a, q);
      break;
    case WaveSolution::exp_i:
      u = q_exp_function(Complex(0.0, a), q);
      break;
  }
  const Complex second = jackson_second_derivative(u, x, q);
  const Complex restoring = a * a * u(x);
  return {std::abs(second + restoring),
          second_derivative_scale(u, x, q) + std::abs(second) +
              std::abs(restoring)};
}

Residual exp_eigen_residual(double a, double x, const QParam& q) {
  if (x == 0.0) throw DomainError("exp_eigen_residual requires x != 0");
  const Evaluable e = q_exp_function(a, q);
  const Complex derivative = jackson_derivative(e, x, q);
  const Complex expected = a * e(x);
  return {std::abs(derivative - expected),
          first_derivative_scale(e, x, q) + std::abs(derivative) +
              std::abs(expected)};
}

Residual exp_integral_residual(double a, double x, const QParam& q,
                               SumControl control) {
  if (a == 0.0) throw DomainError("exp_integral_residual requires a != 0");
  const Complex integral = q_integral_finite(q_exp_function(a, q), x, q, control);
  const Complex exa = q_exp(a * x, q).value;
  const Complex expected = (exa - 1.0) / a;
  return {std::abs(integral - expected),
          std::abs(integral) + (std::abs(exa) + 1.0) / std::abs(a)};
}

}  // namespace qdeform
