#pragma once

// Jackson derivative, dilatation and Jackson q-integrals on the lattice
// x = a q^{2n+1}, plus residual forms of the q-Leibniz rule, the scaling
// property, the fundamental theorem and q-integration by parts.

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <vector>

#include "qdeform/qnum.hpp"

namespace qdeform {

using Complex = std::complex<double>;

enum class DecayHint { none, rapid_at_infinity };

/// A side-effect-free function of a real variable with complex values.
struct Evaluable {
  std::function<Complex(double)> fn;
  DecayHint decay = DecayHint::none;
  bool regular_at_zero = true;

  Complex operator()(double x) const { return fn(x); }
};

/// Truncated power series sum_k c_k x^k.
class PowerSeries {
 public:
  PowerSeries() = default;
  explicit PowerSeries(std::vector<Complex> coefficients)
      : coefficients_(std::move(coefficients)) {}
  PowerSeries(std::initializer_list<Complex> coefficients)
      : coefficients_(coefficients) {}

  const std::vector<Complex>& coefficients() const noexcept {
    return coefficients_;
  }
  bool empty() const noexcept { return coefficients_.empty(); }
  /// Highest stored power; -1 for the zero series.
  int order() const noexcept { return static_cast<int>(coefficients_.size()) - 1; }

  /// Horner evaluation.
  Complex operator()(Complex x) const;

 private:
  std::vector<Complex> coefficients_;
};

/// Residual of an identity together with the magnitude of the terms that
/// enter it; contracts are stated as abs <= tolerance * scale.
struct Residual {
  double abs = 0.0;
  double scale = 1.0;

  double relative() const noexcept { return scale > 0.0 ? abs / scale : abs; }
  bool within(double tolerance) const noexcept { return abs <= tolerance * scale; }
};

/// Stopping rule shared by every q-sum: stop after three consecutive terms
/// with |term| <= tol * |partial sum|, give up after max_terms.
struct SumControl {
  double tol = 1e-14;
  std::size_t max_terms = 1'000'000;
};

/// f(q x).
Complex dilatation(const Evaluable& f, double x, const QParam& q);

/// (f(qx) - f(x/q)) / ((q - 1/q) x). On the classical branch the ordinary
/// derivative, by Richardson-extrapolated central differences.
/// Throws DomainError at x = 0; use jackson_derivative_series there.
Complex jackson_derivative(const Evaluable& f, double x, const QParam& q);

/// Second Jackson derivative D(D f)(x); the ordinary second derivative on the
/// classical branch.
Complex jackson_second_derivative(const Evaluable& f, double x, const QParam& q);

/// Magnitude of the terms combined by jackson_derivative at x: the natural
/// scale for residuals built on it. Zero on the classical branch.
double first_derivative_scale(const Evaluable& f, double x, const QParam& q);

/// Same for jackson_second_derivative.
double second_derivative_scale(const Evaluable& f, double x, const QParam& q);

/// Exact action on coefficients: c_k x^k -> [k] c_k x^{k-1}.
PowerSeries jackson_derivative_series(const PowerSeries& s, const QParam& q);

/// x -> f(factor * x).
Evaluable dilated(const Evaluable& f, double factor);
/// x -> D_x f(x) as a new Evaluable.
Evaluable jackson_derivative_of(const Evaluable& f, const QParam& q);
Evaluable product(const Evaluable& f, const Evaluable& g);

enum class LeibnizVariant {
  inverse_shift,  ///< D(fg) = Df(x) g(x/q) + f(qx) Dg(x)
  forward_shift,  ///< D(fg) = Df(x) g(qx) + f(x/q) Dg(x)
};

Residual q_leibniz_residual(const Evaluable& f, const Evaluable& g, double x,
                            const QParam& q, LeibnizVariant variant);

/// |D_{ax} f(x) - D_x f(x) / a|.
Residual chain_scaling_residual(const Evaluable& f, double a, double x,
                                const QParam& q);

/// int_0^a f d_q x = a (1/q - q) sum_{n>=0} q^{2n+1} f(a q^{2n+1}).
/// Requires a > 0 and a non-classical q (q > 1 is read as 1/q).
Complex q_integral_finite(const Evaluable& f, double a, const QParam& q,
                          SumControl control = {});

/// int_0^inf f d_q x = (1/q - q) sum_{n in Z} q^{2n+1} f(q^{2n+1}).
Complex q_integral_halfline(const Evaluable& f, const QParam& q,
                            SumControl control = {});

/// Half-line integral of f(x) plus that of f(-x): the mirrored lattice.
Complex q_integral_fullline(const Evaluable& f, const QParam& q,
                            SumControl control = {});

enum class PartsVariant {
  shifted_q,     ///< int f Dg = [f(qx) g(x)]_0^a - int D_x[f(q.)](x) g(qx)
  shifted_qinv,  ///< int f Dg = [f(x/q) g(x)]_0^a - int D_x[f(./q)](x) g(x/q)
};

Residual integration_by_parts_residual(const Evaluable& f, const Evaluable& g,
                                       double a, const QParam& q,
                                       PartsVariant variant,
                                       SumControl control = {});

/// |D_x int_0^x f d_q t - f(x)|.
Residual fundamental_theorem_derivative_residual(const Evaluable& f, double x,
                                                 const QParam& q,
                                                 SumControl control = {});
/// |int_0^a D_x f d_q x - (f(a) - f(0))|.
Residual fundamental_theorem_integral_residual(const Evaluable& f, double a,
                                               const QParam& q,
                                               SumControl control = {});

/// True iff |f(x q^n) - f(0)| is finite, non-increasing over the second half
/// of 0..n_max and ends below tol * max(1, |f(0)|).
bool q_regularity_check(const Evaluable& f, double x, const QParam& q,
                        int n_max, double tol = 1e-8);

}  // namespace qdeform
