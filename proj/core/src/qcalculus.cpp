#include "qdeform/qcalculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "qdeform/errors.hpp"

namespace qdeform {

namespace {

using LongComplex = std::complex<long double>;

double canonical_subunit(const QParam& q, const char* what) {
  if (q.classical()) {
    throw DomainError(std::string(what) +
                      " requires a deformed parameter (0 < q < 1); the "
                      "geometric lattice does not exist at q = 1");
  }
  return q.canonical();
}

void require_finite(const Complex& value, const char* what, std::size_t terms) {
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    throw ConvergenceError(std::string(what) + ": non-finite term encountered",
                           terms);
  }
}

// Applies the stopping rule to one direction of a lattice sum.
class TailCounter {
 public:
  explicit TailCounter(double tol) : tol_(tol) {}

  void observe(long double term_abs, long double sum_abs) {
    if (term_abs <= tol_ * sum_abs) {
      ++small_;
    } else {
      small_ = 0;
    }
  }
  bool done() const noexcept { return small_ >= 3; }

 private:
  long double tol_;
  int small_ = 0;
};

// Ridders' extrapolation of a central-difference quotient whose error is a
// series in h^2. quotient(h) must approach the derivative as h -> 0.
template <typename Quotient>
Complex ridders(Quotient quotient, double h0) {
  constexpr int kTable = 12;
  constexpr double kShrink = 1.4;
  constexpr double kShrink2 = kShrink * kShrink;
  Complex table[kTable][kTable];
  double h = h0;
  table[0][0] = quotient(h);
  Complex best = table[0][0];
  double err = std::numeric_limits<double>::infinity();
  for (int i = 1; i < kTable; ++i) {
    h /= kShrink;
    table[0][i] = quotient(h);
    double factor = kShrink2;
    for (int j = 1; j <= i; ++j) {
      table[j][i] = (table[j - 1][i] * factor - table[j - 1][i - 1]) / (factor - 1.0);
      factor *= kShrink2;
      const double e = std::max(std::abs(table[j][i] - table[j - 1][i]),
                                std::abs(table[j][i] - table[j - 1][i - 1]));
      if (e <= err) {
        err = e;
        best = table[j][i];
      }
    }
    // Stop once the higher orders start to diverge.
    if (std::abs(table[i][i] - table[i - 1][i - 1]) >= 2.0 * err) break;
  }
  return best;
}

double initial_step(double x) { return 0.1 * std::max(1.0, std::abs(x)) / (1.0 + std::abs(x)); }

Complex classical_derivative(const Evaluable& f, double x) {
  return ridders([&](double h) { return (f(x + h) - f(x - h)) / (2.0 * h); },
                 initial_step(x));
}

Complex classical_second_derivative(const Evaluable& f, double x) {
  const Complex fx = f(x);
  return ridders([&](double h) { return (f(x + h) - 2.0 * fx + f(x - h)) / (h * h); },
                 initial_step(x));
}

}  // namespace

Complex PowerSeries::operator()(Complex x) const {
  Complex acc = 0.0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
    acc = acc * x + *it;
  }
  return acc;
}

Complex dilatation(const Evaluable& f, double x, const QParam& q) {
  return f(q.value() * x);
}

Complex jackson_derivative(const Evaluable& f, double x, const QParam& q) {
  if (x == 0.0) {
    throw DomainError(
        "jackson_derivative is undefined at x = 0 for a generic function; "
        "use jackson_derivative_series on a power-series representation");
  }
  if (q.classical()) return classical_derivative(f, x);
  const double p = q.canonical();
  return (f(p * x) - f(x / p)) / ((p - 1.0 / p) * x);
}

Complex jackson_second_derivative(const Evaluable& f, double x, const QParam& q) {
  if (x == 0.0) {
    throw DomainError("jackson_second_derivative is undefined at x = 0");
  }
  if (q.classical()) return classical_second_derivative(f, x);
  const double p = q.canonical();
  const double c = p - 1.0 / p;
  return (f(p * p * x) / p - f(x) * (p + 1.0 / p) + p * f(x / (p * p))) /
         (c * c * x * x);
}

double first_derivative_scale(const Evaluable& f, double x, const QParam& q) {
  if (q.classical() || x == 0.0) return 0.0;
  const double p = q.canonical();
  return (std::abs(f(p * x)) + std::abs(f(x / p))) / std::abs((p - 1.0 / p) * x);
}

double second_derivative_scale(const Evaluable& f, double x, const QParam& q) {
  if (q.classical() || x == 0.0) return 0.0;
  const double p = q.canonical();
  const double c = p - 1.0 / p;
  return (std::abs(f(p * p * x)) / p + std::abs(f(x)) * (p + 1.0 / p) +
          p * std::abs(f(x / (p * p)))) /
         (c * c * x * x);
}

PowerSeries jackson_derivative_series(const PowerSeries& s, const QParam& q) {
  const auto& c = s.coefficients();
  if (c.size() <= 1) return PowerSeries{};
  std::vector<Complex> out(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) {
    out[k - 1] = static_cast<double>(basic_number(static_cast<Real>(k), q)) * c[k];
  }
  return PowerSeries(std::move(out));
}

Evaluable dilated(const Evaluable& f, double factor) {
  return {[f, factor](double x) { return f(factor * x); }, f.decay,
          f.regular_at_zero};
}

Evaluable jackson_derivative_of(const Evaluable& f, const QParam& q) {
  return {[f, q](double x) { return jackson_derivative(f, x, q); }, f.decay,
          f.regular_at_zero};
}

Evaluable product(const Evaluable& f, const Evaluable& g) {
  const bool decays = f.decay == DecayHint::rapid_at_infinity ||
                      g.decay == DecayHint::rapid_at_infinity;
  return {[f, g](double x) { return f(x) * g(x); },
          decays ? DecayHint::rapid_at_infinity : DecayHint::none,
          f.regular_at_zero && g.regular_at_zero};
}

Residual q_leibniz_residual(const Evaluable& f, const Evaluable& g, double x,
                            const QParam& q, LeibnizVariant variant) {
  const double p = q.classical() ? 1.0 : q.canonical();
  const Complex lhs = jackson_derivative(product(f, g), x, q);
  const Complex df = jackson_derivative(f, x, q);
  const Complex dg = jackson_derivative(g, x, q);
  Complex first;
  Complex second;
  if (variant == LeibnizVariant::inverse_shift) {
    first = df * g(x / p);
    second = f(p * x) * dg;
  } else {
    first = df * g(p * x);
    second = f(x / p) * dg;
  }
  return {std::abs(lhs - first - second),
          std::abs(lhs) + std::abs(first) + std::abs(second)};
}

Residual chain_scaling_residual(const Evaluable& f, double a, double x,
                                const QParam& q) {
  if (a == 0.0 || x == 0.0) {
    throw DomainError("chain_scaling_residual requires a != 0 and x != 0");
  }
  // Derivative with respect to y = a x: the same dilatation of the argument,
  // measured against the scaled increment.
  Complex scaled;
  if (q.classical()) {
    scaled = classical_derivative(f, x) / a;
  } else {
    const double p = q.canonical();
    scaled = (f(p * x) - f(x / p)) / ((p - 1.0 / p) * (a * x));
  }
  const Complex reference = jackson_derivative(f, x, q) / a;
  return {std::abs(scaled - reference), std::abs(scaled) + std::abs(reference)};
}

Complex q_integral_finite(const Evaluable& f, double a, const QParam& q,
                          SumControl control) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw DomainError("q_integral_finite requires a finite upper limit a > 0");
  }
  const long double p = canonical_subunit(q, "q_integral_finite");
  LongComplex sum = 0.0L;
  TailCounter tail(control.tol);
  for (std::size_t n = 0; n < control.max_terms; ++n) {
    const long double node = std::pow(p, static_cast<long double>(2 * n + 1));
    const Complex value = f(static_cast<double>(a * node));
    require_finite(value, "q_integral_finite", n);
    const LongComplex term = node * LongComplex(value.real(), value.imag());
    sum += term;
    tail.observe(std::abs(term), std::abs(sum));
    if (tail.done()) {
      const LongComplex result = static_cast<long double>(a) * (1.0L / p - p) * sum;
      return {static_cast<double>(result.real()), static_cast<double>(result.imag())};
    }
  }
  throw ConvergenceError("q_integral_finite did not converge", control.max_terms);
}

Complex q_integral_halfline(const Evaluable& f, const QParam& q,
                            SumControl control) {
  const long double p = canonical_subunit(q, "q_integral_halfline");
  LongComplex sum = 0.0L;
  TailCounter inward(control.tol);
  TailCounter outward(control.tol);
  std::size_t terms = 0;
  // Nodes q^{2n+1}: n = 0, 1, ... toward zero, n = -1, -2, ... toward infinity.
  for (long long k = 0; terms < control.max_terms; ++k) {
    for (const long long n : {k, -k - 1}) {
      TailCounter& counter = n >= 0 ? inward : outward;
      if (counter.done()) continue;
      const long double node = std::pow(p, static_cast<long double>(2 * n + 1));
      const Complex value = f(static_cast<double>(node));
      require_finite(value, "q_integral_halfline", terms);
      const LongComplex term = node * LongComplex(value.real(), value.imag());
      sum += term;
      ++terms;
      counter.observe(std::abs(term), std::abs(sum));
    }
    if (inward.done() && outward.done()) {
      const LongComplex result = (1.0L / p - p) * sum;
      return {static_cast<double>(result.real()), static_cast<double>(result.imag())};
    }
  }
  throw ConvergenceError("q_integral_halfline did not converge", terms);
}

Complex q_integral_fullline(const Evaluable& f, const QParam& q,
                            SumControl control) {
  return q_integral_halfline(f, q, control) +
         q_integral_halfline(dilated(f, -1.0), q, control);
}

Residual integration_by_parts_residual(const Evaluable& f, const Evaluable& g,
                                       double a, const QParam& q,
                                       PartsVariant variant, SumControl control) {
  const double p = canonical_subunit(q, "integration_by_parts_residual");
  const double shift = variant == PartsVariant::shifted_q ? p : 1.0 / p;

  const Evaluable dg = jackson_derivative_of(g, q);
  const Complex lhs = q_integral_finite(product(f, dg), a, q, control);

  const Complex boundary = f(shift * a) * g(a) - f(0.0) * g(0.0);

  const Evaluable d_shifted_f = jackson_derivative_of(dilated(f, shift), q);
  const Complex rest =
      q_integral_finite(product(d_shifted_f, dilated(g, shift)), a, q, control);

  return {std::abs(lhs - boundary + rest),
          std::abs(lhs) + std::abs(boundary) + std::abs(rest)};
}

Residual fundamental_theorem_derivative_residual(const Evaluable& f, double x,
                                                 const QParam& q,
                                                 SumControl control) {
  if (!(x > 0.0)) {
    throw DomainError("fundamental theorem check needs x > 0");
  }
  const double p = canonical_subunit(q, "fundamental_theorem_derivative_residual");
  const Complex upper = q_integral_finite(f, p * x, q, control);
  const Complex lower = q_integral_finite(f, x / p, q, control);
  const double denom = (p - 1.0 / p) * x;
  const Complex derivative = (upper - lower) / denom;
  const Complex fx = f(x);
  return {std::abs(derivative - fx),
          (std::abs(upper) + std::abs(lower)) / std::abs(denom) + std::abs(fx)};
}

Residual fundamental_theorem_integral_residual(const Evaluable& f, double a,
                                               const QParam& q,
                                               SumControl control) {
  const Complex integral =
      q_integral_finite(jackson_derivative_of(f, q), a, q, control);
  const Complex fa = f(a);
  const Complex f0 = f(0.0);
  return {std::abs(integral - (fa - f0)),
          std::abs(integral) + std::abs(fa) + std::abs(f0)};
}

bool q_regularity_check(const Evaluable& f, double x, const QParam& q, int n_max,
                        double tol) {
  const double p = canonical_subunit(q, "q_regularity_check");
  if (n_max < 2) {
    throw DomainError("q_regularity_check needs n_max >= 2");
  }
  const Complex f0 = f(0.0);
  if (!std::isfinite(f0.real()) || !std::isfinite(f0.imag())) return false;

  std::vector<double> gaps;
  gaps.reserve(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    const Complex value = f(x * std::pow(p, n));
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) return false;
    gaps.push_back(std::abs(value - f0));
  }
  for (int n = n_max / 2 + 1; n <= n_max; ++n) {
    if (gaps[n] > gaps[n - 1]) return false;
  }
  return gaps.back() <= tol * std::max(1.0, std::abs(f0));
}

}  // namespace qdeform
